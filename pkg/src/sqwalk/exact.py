"""Helpers for exact Gaussian-rational arithmetic.

Exact quantities are sympy ``QQ_I`` elements (``a + b*i`` with rational
``a`` and ``b``).  Everything else in the package uses Python/numpy complex
doubles; the helpers here convert between the two worlds.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from sympy.polys.domains import QQ, QQ_I

ZERO = QQ_I.zero
ONE = QQ_I.one


def is_exact(value) -> bool:
    return isinstance(value, QQ_I.dtype)


def to_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction.

    Floats are rejected: their binary expansion is never what the caller
    meant by an exact entry.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def gaussian(re, im=0):
    """Build an exact Gaussian rational from rational-like parts."""
    a, b = to_rational(re), to_rational(im)
    return QQ_I(QQ(a.numerator, a.denominator), QQ(b.numerator, b.denominator))


def to_exact(value):
    """Coerce ``value`` to QQ_I; accepts QQ_I, rationals, strings and (re, im)."""
    if is_exact(value):
        return value
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return gaussian(*value)
    return gaussian(value)


def parts(value) -> tuple[Fraction, Fraction]:
    """Real and imaginary parts of an exact value as Fractions."""
    value = to_exact(value)
    return (
        Fraction(int(value.x.numerator), int(value.x.denominator)),
        Fraction(int(value.y.numerator), int(value.y.denominator)),
    )


def to_complex(value) -> complex:
    if is_exact(value):
        re, im = parts(value)
        return complex(float(re), float(im))
    return complex(value)


def conj(value):
    return QQ_I(value.x, -value.y)


def abs2(value) -> Fraction:
    """Exact squared modulus."""
    re, im = parts(value)
    return re * re + im * im


def format_exact(value) -> str:
    re, im = parts(value)
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}i"
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{abs(im)}i"
