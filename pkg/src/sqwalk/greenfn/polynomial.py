"""Dense univariate polynomials and rational functions in the step variable z.

Coefficients are either Python complex numbers (float mode) or sympy QQ_I
Gaussian rationals (exact mode); a polynomial never mixes the two.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .. import exact as ex
from ..errors import NonExpandableError


def _is_zero(c) -> bool:
    return not c


class Polynomial:
    """Coefficient list, index = power of z, trailing zeros trimmed.

    The degree of the zero polynomial is ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, power: int, c=1.0 + 0j) -> "Polynomial":
        zero = ex.ZERO if ex.is_exact(c) else 0j
        return cls([zero] * power + [c])

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    @property
    def is_exact(self) -> bool:
        return any(ex.is_exact(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _zero(self):
        return ex.ZERO if self.is_exact else 0j

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self._zero()

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, z):
        acc = self._zero()
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [None] * (n - len(self.coeffs))
        b = list(other.coeffs) + [None] * (n - len(other.coeffs))
        return Polynomial([x if y is None else y if x is None else x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                term = a * b
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        zero = ex.ZERO if (self.is_exact or other.is_exact) else 0j
        return Polynomial([zero if c is None else c for c in out])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial([ex.ONE if self.is_exact else 1.0 + 0j])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        return Polynomial([c * x for x in self.coeffs])

    def shift(self, k: int) -> "Polynomial":
        """Multiply by ``z^k``."""
        return Polynomial([self._zero()] * k + list(self.coeffs)) if self.coeffs else Polynomial()

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Euclidean division; meant for exact coefficients."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), Polynomial(rem)
        lead = other.coeffs[-1]
        quot = [None] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if not _is_zero(c):
                for i, b in enumerate(other.coeffs):
                    rem[k + i] = rem[k + i] - c * b
        return Polynomial(quot), Polynomial(rem[: len(other.coeffs) - 1])

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Polynomial":
        return self.scale(1 / self.coeffs[-1]) if self.coeffs else self

    def to_complex(self) -> "Polynomial":
        return Polynomial([ex.to_complex(c) for c in self.coeffs])

    def trimmed(self, rel_tol: float) -> "Polynomial":
        """Drop float coefficients below ``rel_tol * max|c|``."""
        if not self.coeffs or self.is_exact:
            return self
        big = max(abs(c) for c in self.coeffs)
        return Polynomial([c if abs(c) > rel_tol * big else 0j for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm (exact coefficients)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


class RationalFunction:
    """``numerator / denominator`` with ``denominator(0) = 1``.

    The constant term of the denominator is normalised to one on
    construction, so the Taylor expansion at ``z = 0`` always exists.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None):
        num = numerator if isinstance(numerator, Polynomial) else Polynomial(numerator if isinstance(numerator, Sequence) else [numerator])
        if denominator is None:
            den = Polynomial([ex.ONE if num.is_exact else 1.0 + 0j])
        else:
            den = denominator if isinstance(denominator, Polynomial) else Polynomial(denominator if isinstance(denominator, Sequence) else [denominator])
        if den.is_zero() or _is_zero(den[0]):
            raise NonExpandableError("denominator vanishes at z = 0; no Taylor expansion exists")
        c0 = den[0]
        one = ex.ONE if ex.is_exact(c0) else 1.0
        if c0 != one:
            inv = 1 / c0
            num, den = num.scale(inv), den.scale(inv)
        self.numerator = num
        self.denominator = den

    @property
    def is_exact(self) -> bool:
        return self.numerator.is_exact or self.denominator.is_exact

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(other if isinstance(other, Polynomial) else Polynomial([other]))

    def __add__(self, other):
        o = self._coerce(other)
        if self.denominator == o.denominator:
            return RationalFunction(self.numerator + o.numerator, self.denominator)
        return RationalFunction(self.numerator * o.denominator + o.numerator * self.denominator, self.denominator * o.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.numerator * o.numerator, self.denominator * o.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.numerator * o.denominator, self.denominator * o.numerator)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def shift(self, k: int) -> "RationalFunction":
        return RationalFunction(self.numerator.shift(k), self.denominator)

    def reduced(self) -> "RationalFunction":
        """Cancel the common factor of numerator and denominator (exact mode)."""
        if not self.is_exact:
            raise TypeError("common-factor cancellation needs exact coefficients")
        if self.numerator.is_zero():
            return RationalFunction(Polynomial(), Polynomial([ex.ONE]))
        g = poly_gcd(self.numerator, self.denominator)
        if g.degree <= 0:
            return self
        return RationalFunction(self.numerator.exact_div(g), self.denominator.exact_div(g))

    def to_complex(self) -> "RationalFunction":
        return RationalFunction(self.numerator.to_complex(), self.denominator.to_complex())

    def integer_form(self) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
        """Exact coefficients scaled to Gaussian integers, integer content removed.

        Returned as ``(numerator, denominator)`` lists of ``(re, im)`` pairs.
        """
        if not self.is_exact:
            raise TypeError("integer form needs exact coefficients")
        pairs = [ex.parts(c) for c in list(self.numerator) + list(self.denominator)]
        lcm = 1
        for re, im in pairs:
            lcm = math.lcm(lcm, re.denominator, im.denominator)
        ints = [(int(re * lcm), int(im * lcm)) for re, im in pairs]
        content = 0
        for re, im in ints:
            content = math.gcd(content, re, im)
        content = content or 1
        ints = [(re // content, im // content) for re, im in ints]
        k = len(self.numerator)
        return ints[:k], ints[k:]

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RationalFunction({list(self.numerator)!r}, {list(self.denominator)!r})"
