"""Step operator: Taylor coefficients of a Green function and hitting probabilities."""

from __future__ import annotations

from fractions import Fraction

from .. import exact as ex
from ..errors import NonExpandableError
from ..greenfn.polynomial import RationalFunction


def step_coefficients(rf: RationalFunction, n_max: int) -> list:
    """Coefficients ``c_0..c_{n_max}`` of the expansion of ``rf`` at ``z = 0``.

    Uses ``c_n = num_n - sum_{k>=1} den_k c_{n-k}`` with ``den_0 = 1``.
    Exact functions give exact coefficients, float functions complex ones.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    den = rf.denominator
    if den.is_zero() or not den[0]:
        raise NonExpandableError("denominator vanishes at z = 0")
    exact = rf.is_exact
    zero = ex.ZERO if exact else 0j
    num = [rf.numerator[k] if k < len(rf.numerator) else zero for k in range(n_max + 1)]
    d = list(den.coeffs)
    out = []
    for n in range(n_max + 1):
        acc = num[n]
        for k in range(1, min(n, len(d) - 1) + 1):
            if d[k]:
                acc = acc - d[k] * out[n - k]
        out.append(acc)
    if not exact:
        out = [complex(c) for c in out]
    return out


def step_operator(rf: RationalFunction, n: int):
    """The single coefficient of ``z^n``."""
    return step_coefficients(rf, n)[n]


def hitting_probability(rf: RationalFunction, n: int):
    """``|c_n|^2``: probability of first arrival at exactly step ``n``.

    Returns a Fraction for exact input, a float otherwise.
    """
    c = step_operator(rf, n)
    if ex.is_exact(c):
        return ex.abs2(c)
    return abs(c) ** 2


def hitting_probabilities(rf: RationalFunction, n_max: int) -> list:
    cs = step_coefficients(rf, n_max)
    if rf.is_exact:
        return [ex.abs2(c) for c in cs]
    return [abs(c) ** 2 for c in cs]


def cumulative(probs) -> list:
    out, acc = [], Fraction(0) if probs and isinstance(probs[0], Fraction) else 0.0
    for p in probs:
        acc = acc + p
        out.append(acc)
    return out
