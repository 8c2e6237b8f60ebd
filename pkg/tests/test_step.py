from fractions import Fraction

import numpy as np
import pytest

from sqwalk import exact as ex
from sqwalk.errors import NonExpandableError
from sqwalk.greenfn import GreenRequest, Polynomial, RationalFunction, green_function
from sqwalk.greenfn.reference import grover_diamond_hitting, symmetric_diamond_hitting
from sqwalk.operators import cumulative, hitting_probabilities, hitting_probability, step_coefficients, step_operator
from sqwalk.verify import symmetric_coin


def grover_T(diamond, coins, exact=True):
    return green_function(diamond, coins, GreenRequest(diamond.mark("entry"), diamond.mark("exit")), exact=exact)


def test_monomial_coefficients():
    cs = step_coefficients(RationalFunction(Polynomial.monomial(3)), 6)
    assert cs == [0, 0, 0, 1, 0, 0, 0]


def test_grover_coefficients(diamond, grover_coins):
    rf = grover_T(diamond, grover_coins)
    cs = step_coefficients(rf, 11)
    assert ex.parts(cs[3]) == (Fraction(8, 9), 0)
    assert ex.parts(cs[7]) == (Fraction(8, 81), 0)
    assert all(not c for n, c in enumerate(cs) if n % 4 != 3)


def test_grover_probabilities(diamond, grover_coins):
    rf = grover_T(diamond, grover_coins)
    assert hitting_probability(rf, 3) == Fraction(64, 81)
    assert hitting_probability(rf, 4) == 0
    assert hitting_probability(rf, 0) == 0
    probs = hitting_probabilities(rf, 23)
    assert probs == [grover_diamond_hitting(n) for n in range(24)]
    assert abs(hitting_probability(grover_T(diamond, grover_coins, exact=False), 3) - 64 / 81) <= 1e-15


def test_symmetric_crossing_probabilities(diamond, rng):
    for _ in range(20):
        (ca, ra, ta), (cb, rb, tb) = symmetric_coin(3, rng), symmetric_coin(2, rng)
        rf = grover_T(diamond, {0: ca, 3: ca, 1: cb, 2: cb}, exact=False)
        probs = hitting_probabilities(rf, 25)
        for n, p in enumerate(probs):
            assert abs(p - symmetric_diamond_hitting(ta, ra, tb, rb, n)) <= 1e-9
        assert all(p <= 1e-20 for n, p in enumerate(probs) if n % 2 == 0 or n < 3)


def test_step_operator_and_cumulative(diamond, grover_coins):
    rf = grover_T(diamond, grover_coins)
    assert step_operator(rf, 7) == step_coefficients(rf, 7)[7]
    acc = cumulative(hitting_probabilities(rf, 19))
    assert acc[-1] == sum(Fraction(64, 81**m) for m in range(1, 6))
    assert 0.7999 < float(acc[-1]) < 0.8
    assert all(a <= b for a, b in zip(acc, acc[1:]))


def test_bad_inputs():
    with pytest.raises(ValueError):
        step_coefficients(RationalFunction(Polynomial([1.0])), -1)
    with pytest.raises(NonExpandableError):
        RationalFunction(Polynomial([1.0]), Polynomial([0.0, 1.0]))


def test_float_recurrence_matches_series(rng):
    # 1/(1 - a z) = sum a^n z^n
    a = 0.3 + 0.4j
    cs = step_coefficients(RationalFunction(Polynomial([1 + 0j]), Polynomial([1 + 0j, -a])), 12)
    assert np.allclose(cs, [a**n for n in range(13)], atol=1e-15)
