"""Step and path operators acting on walk Green functions."""

from .series import (
    EXACT,
    PARTIAL,
    CoinSymbol,
    MultivariateSeries,
    PathDescriptor,
    arm_split_filter,
    coin_symbols,
    default_symbols,
    diamond_arm_groups,
    numeric_values,
    path_filter,
    symbolic_series,
)
from .step import cumulative, hitting_probabilities, hitting_probability, step_coefficients, step_operator

__all__ = [
    "EXACT",
    "PARTIAL",
    "CoinSymbol",
    "MultivariateSeries",
    "PathDescriptor",
    "arm_split_filter",
    "coin_symbols",
    "default_symbols",
    "diamond_arm_groups",
    "numeric_values",
    "path_filter",
    "symbolic_series",
    "cumulative",
    "hitting_probabilities",
    "hitting_probability",
    "step_coefficients",
    "step_operator",
]
