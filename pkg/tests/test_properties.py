"""Property-based checks on random connected graphs."""

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from sqwalk import WalkState, apply_step, evolve
from sqwalk.coins import coin_from_matrix, random_unitary
from sqwalk.evolution import first_arrival_amplitudes
from sqwalk.greenfn import GreenRequest, evaluate_at, green_function
from sqwalk.operators import (
    PathDescriptor,
    arm_split_filter,
    diamond_arm_groups,
    path_filter,
    step_coefficients,
    symbolic_series,
)
from sqwalk.topology import build_diamond_with_leads
from sqwalk.verify import random_coins, random_walk_graph

seeds = st.integers(0, 2**32 - 1)
cores = st.integers(2, 10)


def make(seed, n_core, leads=True):
    rng = np.random.default_rng(seed)
    g = random_walk_graph(rng, n_core, leads=leads, extra_sinks=int(rng.integers(0, 2)) if leads else 0)
    return g, random_coins(g, rng), rng


@given(seeds, cores)
def test_partner_involution_and_reciprocity(seed, n_core):
    g, _, _ = make(seed, n_core)
    for s in g.states():
        p = g.partner(s)
        assert p != s and g.partner(p) == s
    for j in range(g.num_sites):
        for sigma, jp, sigma_p in zip(g.own_labels(j), g.neighbors(j), g.incoming_labels(j)):
            m = g.neighbors(jp).index(j)
            assert g.own_labels(jp)[m] == sigma_p and g.incoming_labels(jp)[m] == sigma


@given(seeds, cores)
def test_norm_preserved_on_closed_graphs(seed, n_core):
    g, coins, rng = make(seed, n_core, leads=False)
    psi = WalkState.basis(g.states()[int(rng.integers(0, len(g.states())))])
    psi = evolve(psi, 25, g, coins)
    assert abs(psi.norm2() - 1) <= 1e-12 * 25


@given(seeds, cores)
def test_norm_plus_leakage_conserved(seed, n_core):
    g, coins, _ = make(seed, n_core)
    psi = evolve(WalkState.basis(g.mark("entry")), 30, g, coins)
    assert abs(psi.norm2() + psi.leaked - 1) <= 1e-12


@given(seeds, cores)
def test_locality(seed, n_core):
    g, coins, _ = make(seed, n_core)
    for s in g.states():
        out = apply_step(WalkState.basis(s), g, coins)
        allowed = {g.partner(type(s)(s.site, l)) for l in g.own_labels(s.site)}
        assert set(out.support()) <= allowed


@given(seeds, cores, st.complex_numbers(max_magnitude=1), st.complex_numbers(max_magnitude=1))
def test_linearity(seed, n_core, a, b):
    g, coins, rng = make(seed, n_core)
    states = g.states()
    s1, s2 = states[int(rng.integers(0, len(states)))], states[int(rng.integers(0, len(states)))]
    combo = evolve(WalkState.basis(s1) * a + WalkState.basis(s2) * b, 6, g, coins)
    e1, e2 = evolve(WalkState.basis(s1), 6, g, coins), evolve(WalkState.basis(s2), 6, g, coins)
    for s in states:
        assert abs(combo.amplitude(s) - (a * e1.amplitude(s) + b * e2.amplitude(s))) <= 1e-13


@given(seeds, cores)
def test_green_matches_oracle(seed, n_core):
    g, coins, _ = make(seed, n_core)
    for exit_name in ("exit", "refl"):
        req = GreenRequest(g.mark("entry"), g.mark(exit_name))
        cs = np.array(step_coefficients(green_function(g, coins, req), 30))
        oracle = first_arrival_amplitudes(g, coins, req.entry, req.exit, 30)
        assert np.max(np.abs(cs - oracle)) <= 1e-9


@given(seeds, cores)
def test_reciprocity_with_symmetric_coins(seed, n_core):
    # symmetric coins make the walk time-reversal invariant:
    # amplitude a -> b equals amplitude reverse(b) -> reverse(a)
    rng = np.random.default_rng(seed)
    g = random_walk_graph(rng, n_core)
    coins = {}
    for j in range(g.num_sites):
        if not g.free[j]:
            u = random_unitary(g.valence[j], rng)
            coins[j] = coin_from_matrix(u @ u.T, time_reversal=True)
    a, b = g.mark("entry"), g.mark("exit")
    fwd = green_function(g, coins, GreenRequest(a, b, absorbing=False))
    bwd = green_function(g, coins, GreenRequest(g.partner(b), g.partner(a), absorbing=False))
    for z in (0.3, 0.5j, -0.4 + 0.2j):
        assert abs(evaluate_at(fwd, z) - evaluate_at(bwd, z)) <= 1e-10


@given(seeds)
def test_diamond_parity(seed):
    g = build_diamond_with_leads(1, 1)
    coins = random_coins(g, np.random.default_rng(seed))
    cs = step_coefficients(green_function(g, coins, GreenRequest(g.mark("entry"), g.mark("exit"))), 20)
    assert all(abs(c) <= 1e-12 for c in cs[::2])


_diamond = build_diamond_with_leads(1, 1)
_series = symbolic_series(_diamond, _diamond.mark("entry"), _diamond.mark("exit"), 9)
_symbols = sorted(_series.symbol_map)


def test_series_orders_are_odd():
    assert all(n % 2 == 1 for n in _series.orders())


@given(
    st.lists(st.tuples(st.sampled_from(_symbols), st.integers(0, 3)), max_size=3, unique_by=lambda t: t[0]),
    st.sampled_from(["partial", "exact"]),
    st.lists(st.sampled_from(_symbols), max_size=4, unique=True),
)
def test_filter_idempotent_and_complementary(factors, mode, exempt):
    p = PathDescriptor(tuple(factors), mode, tuple(exempt))
    once = path_filter(_series, p)
    assert path_filter(once, p) == once
    kept = set(once.terms)
    assert kept <= set(_series.terms)
    for key in kept:
        assert once.terms[key] == _series.terms[key]


@given(st.integers(1, 8), st.integers(1, 8))
def test_arm_split_disjoint(n_plus, n_minus):
    upper, lower, exempt = diamond_arm_groups(_diamond)
    a = arm_split_filter(_series, n_plus, n_minus, upper, lower, exempt)
    b = arm_split_filter(_series, n_plus + 1, n_minus, upper, lower, exempt)
    assert not set(a.terms) & set(b.terms)
