"""Green functions of scattering quantum walks as rational functions of z."""

from .polynomial import Polynomial, RationalFunction, poly_gcd
from .solver import GreenRequest, evaluate, evaluate_at, green_function, transfer_matrix

__all__ = [
    "Polynomial",
    "RationalFunction",
    "poly_gcd",
    "GreenRequest",
    "evaluate",
    "evaluate_at",
    "green_function",
    "transfer_matrix",
]
