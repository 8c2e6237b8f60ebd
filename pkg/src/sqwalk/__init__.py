"""Scattering quantum walks on finite graphs.

Graphs and bond states live in :mod:`sqwalk.topology`, local scattering
matrices in :mod:`sqwalk.coins`, direct unitary evolution in
:mod:`sqwalk.evolution`.  :mod:`sqwalk.greenfn` computes the bond-to-bond
Green function as an exact rational function of the step variable ``z``,
and :mod:`sqwalk.operators` extracts per-step hitting amplitudes and
families of paths from it.
"""

from .coins import (
    CoinMatrix,
    PointInteractionParams,
    assign,
    coin_1d,
    coin_from_matrix,
    coin_grover,
    coin_point_interaction,
    random_coin,
    validate_unitarity,
)
from .errors import (
    CoinError,
    DegenerateRequestError,
    DescriptorError,
    NonExpandableError,
    PoleError,
    SeriesOverflowError,
    SingularParameterError,
    SpecParseError,
    SQWError,
    TopologyError,
)
from .evolution import WalkState, apply_step, evolve, first_arrival_amplitude, first_arrival_amplitudes
from .greenfn import GreenRequest, Polynomial, RationalFunction, evaluate, evaluate_at, green_function
from .operators import (
    EXACT,
    PARTIAL,
    CoinSymbol,
    MultivariateSeries,
    PathDescriptor,
    arm_split_filter,
    hitting_probabilities,
    hitting_probability,
    path_filter,
    step_coefficients,
    step_operator,
    symbolic_series,
)
from .topology import BondState, GraphTopology, build_diamond_with_leads, build_line, from_spec, partner, to_spec

__version__ = "0.1.0"

__all__ = [
    "BondState",
    "CoinError",
    "CoinMatrix",
    "CoinSymbol",
    "DegenerateRequestError",
    "DescriptorError",
    "EXACT",
    "GraphTopology",
    "GreenRequest",
    "MultivariateSeries",
    "NonExpandableError",
    "PARTIAL",
    "PathDescriptor",
    "PointInteractionParams",
    "PoleError",
    "Polynomial",
    "RationalFunction",
    "SQWError",
    "SeriesOverflowError",
    "SingularParameterError",
    "SpecParseError",
    "TopologyError",
    "WalkState",
    "apply_step",
    "arm_split_filter",
    "assign",
    "build_diamond_with_leads",
    "build_line",
    "coin_1d",
    "coin_from_matrix",
    "coin_grover",
    "coin_point_interaction",
    "evaluate",
    "evaluate_at",
    "evolve",
    "first_arrival_amplitude",
    "first_arrival_amplitudes",
    "from_spec",
    "green_function",
    "hitting_probabilities",
    "hitting_probability",
    "partner",
    "path_filter",
    "random_coin",
    "step_coefficients",
    "step_operator",
    "symbolic_series",
    "to_spec",
    "validate_unitarity",
]
