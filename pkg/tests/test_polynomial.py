import math

import pytest

from sqwalk import exact as ex
from sqwalk.errors import NonExpandableError
from sqwalk.greenfn import Polynomial, RationalFunction, poly_gcd


def q(*vals):
    return Polynomial([ex.gaussian(v) for v in vals])


def test_trim_and_degree():
    assert Polynomial([1, 2, 0, 0]).coeffs == (1, 2)
    assert Polynomial().degree == -math.inf
    assert Polynomial([0j, 0j, 3j]).degree == 2


def test_arithmetic_exact():
    a, b = q(1, 1), q(1, -1)
    assert a * b == q(1, 0, -1)
    assert a + b == q(2)
    assert a - a == Polynomial()
    assert a**3 == q(1, 3, 3, 1)
    assert a.shift(2) == q(0, 0, 1, 1)
    assert a(ex.gaussian(2)) == ex.gaussian(3)


def test_divmod_and_exact_div():
    a = q(-1, 0, 0, 1)  # z^3 - 1
    b = q(-1, 1)
    quo, rem = a.divmod(b)
    assert quo == q(1, 1, 1) and rem.is_zero()
    assert a.exact_div(b) == q(1, 1, 1)
    with pytest.raises(ArithmeticError):
        q(1, 0, 1).exact_div(b)


def test_gcd():
    a = q(-1, 0, 1)  # (z-1)(z+1)
    b = q(1, -2, 1)  # (z-1)^2
    assert poly_gcd(a, b) == q(-1, 1)


def test_rational_normalisation():
    rf = RationalFunction(q(0, 0, 0, 8), q(9, 0, 0, 0, -1))
    assert rf.denominator[0] == ex.ONE
    with pytest.raises(NonExpandableError):
        RationalFunction(q(1), q(0, 1))


def test_reduced_and_integer_form():
    common = q(1, 0, 0, 0, -1)
    rf = RationalFunction(q(0, 0, 0, 8) * common, q(9, 0, 0, 0, -1) * common)
    red = rf.reduced()
    num, den = red.integer_form()
    assert num == [(0, 0), (0, 0), (0, 0), (8, 0)]
    assert den == [(9, 0), (0, 0), (0, 0), (0, 0), (-1, 0)]


def test_rational_arithmetic():
    x = RationalFunction(q(0, 1))
    one_minus = RationalFunction(q(1), q(1, -1))
    s = (x * one_minus + one_minus).reduced()
    # z/(1-z) + 1/(1-z) = (1+z)/(1-z)
    assert s == RationalFunction(q(1, 1), q(1, -1))
    assert (one_minus - one_minus).numerator.is_zero()


def test_to_complex_and_trim():
    p = q("1/2", 0, "1/3").to_complex()
    assert not p.is_exact
    assert p(1.0) == pytest.approx(5 / 6)
    noisy = Polynomial([1.0, 1e-20, 2.0])
    assert noisy.trimmed(1e-14).coeffs[1] == 0
