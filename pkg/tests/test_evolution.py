import numpy as np
import pytest

from sqwalk import BondState, WalkState, apply_step, build_line, evolve
from sqwalk.coins import assign, coin_1d, random_coin
from sqwalk.errors import DegenerateRequestError, TopologyError
from sqwalk.evolution import first_arrival_amplitude, first_arrival_amplitudes, probability, trajectory
from sqwalk.greenfn import GreenRequest, green_function
from sqwalk.operators import step_coefficients
from sqwalk.verify import eq7_expected, random_coins, random_walk_graph


def biased_line(n=8):
    g = build_line(n, free=(0, n - 1))
    return g, assign(g, lambda k: coin_1d(1.0, 0.0, 0.0))


def test_biased_line_translates():
    g, coins = biased_line()
    psi = WalkState.basis(g.state(1, "+1"))
    for j in range(2, 7):
        psi = apply_step(psi, g, coins)
        assert psi.support() == (g.state(j, "+1"),)
        assert psi.amplitude(g.state(j, "+1")) == 1


def test_phase_is_deferred():
    g, coins = biased_line()
    psi = evolve(WalkState.basis(g.state(1, "+1")), 3, g, coins)
    assert psi.steps == 3
    assert np.isclose(psi.amplitude(g.state(4, "+1"), gamma=0.5), np.exp(1.5j))


def test_three_step_terms(offset_line, rng):
    g = offset_line
    coins = random_coins(g, rng)
    psi = evolve(WalkState.basis(g.state("0", "+1")), 3, g, coins)
    expected = eq7_expected(coins, g)
    assert set(psi.support()) == set(expected)
    for s, a in expected.items():
        assert abs(psi.amplitude(s) - a) <= 1e-12
    c = lambda j: coins[g.site_id(str(j))].entries  # noqa: E731
    p_back = abs(c(0)[0, 0] * c(-1)[1, 1] * c(0)[0, 0] + c(0)[0, 1] * c(1)[0, 0] * c(0)[1, 0]) ** 2
    assert abs(probability(psi, g.state("-1", "-1")) - p_back) <= 1e-12
    p_far = abs(c(0)[0, 1] * c(1)[0, 1] * c(2)[0, 1]) ** 2
    assert abs(probability(psi, g.state("3", "+1")) - p_far) <= 1e-12
    assert abs(sum(probability(psi, s) for s in g.states()) - 1) <= 1e-12


def test_norm_after_fifty_steps(rng):
    g = random_walk_graph(rng, 8, leads=False)
    coins = random_coins(g, rng)
    psi = WalkState.basis(g.states()[3])
    for n in range(1, 51):
        psi = apply_step(psi, g, coins)
        assert abs(psi.norm2() - 1) <= 1e-12 * n


def test_leakage_accounted(diamond, rng):
    coins = random_coins(diamond, rng)
    psi = evolve(WalkState.basis(diamond.mark("entry")), 40, diamond, coins)
    assert psi.leaked > 0.1
    assert abs(psi.norm2() + psi.leaked - 1) <= 1e-12


def test_evolve_zero_and_composition(diamond, rng):
    coins = random_coins(diamond, rng)
    s = WalkState.basis(diamond.mark("entry"))
    assert evolve(s, 0, diamond, coins) == s
    three = apply_step(apply_step(apply_step(s, diamond, coins), diamond, coins), diamond, coins)
    direct = evolve(s, 3, diamond, coins)
    assert direct.steps == three.steps == 3
    for st in diamond.states():
        assert abs(direct.amplitude(st) - three.amplitude(st)) <= 1e-15
    assert trajectory(s, 3, diamond, coins)[-1] == three
    with pytest.raises(ValueError):
        evolve(s, -1, diamond, coins)


def test_state_off_graph(diamond, grover_coins):
    with pytest.raises(TopologyError):
        apply_step(WalkState.basis(BondState(0, 7)), diamond, grover_coins)


def test_grover_first_exit_at_three(diamond, grover_coins):
    amps = first_arrival_amplitudes(diamond, grover_coins, diamond.mark("entry"), diamond.mark("exit"), 10)
    assert np.all(amps[:3] == 0)
    assert abs(amps[3]) ** 2 == pytest.approx(64 / 81, abs=1e-15)


def test_first_arrival_biased_line():
    g, coins = biased_line()
    a = first_arrival_amplitudes(g, coins, g.state(1, "+1"), g.state(5, "+1"), 10)
    assert a[4] == 1 and np.count_nonzero(a) == 1
    assert first_arrival_amplitude(g, coins, g.state(1, "+1"), g.state(5, "+1"), 4) == 1


def test_first_arrival_degenerate(diamond, grover_coins):
    e = diamond.mark("entry")
    with pytest.raises(DegenerateRequestError):
        first_arrival_amplitudes(diamond, grover_coins, e, e, 3)


def test_first_arrival_matches_green(rng):
    for _ in range(5):
        g = random_walk_graph(rng, int(rng.integers(2, 8)))
        coins = random_coins(g, rng)
        req = GreenRequest(g.mark("entry"), g.mark("exit"))
        cs = step_coefficients(green_function(g, coins, req), 20)
        oracle = first_arrival_amplitudes(g, coins, req.entry, req.exit, 20)
        assert np.max(np.abs(np.array(cs) - oracle)) <= 1e-9


def test_linear_combination(diamond, rng):
    coins = random_coins(diamond, rng)
    a, b = diamond.states()[0], diamond.states()[5]
    combo = WalkState.basis(a) * 0.6 + WalkState.basis(b) * 0.8j
    out = evolve(combo, 4, diamond, coins)
    sep = evolve(WalkState.basis(a), 4, diamond, coins) * 0.6 + evolve(WalkState.basis(b), 4, diamond, coins) * 0.8j
    for s in diamond.states():
        assert abs(out.amplitude(s) - sep.amplitude(s)) <= 1e-14


def test_random_coin_dims(rng):
    assert random_coin(4, rng).dim == 4
