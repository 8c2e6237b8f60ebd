"""Golden-vector and oracle battery.

Each ``check_*`` function runs one family of checks and returns a
:class:`CheckResult`; :func:`run_all` runs the whole battery.  The same
functions back the ``verify`` CLI subcommand and the acceptance tests.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import exact as ex
from .coins import CoinMatrix, assign, coin_from_matrix, coin_grover, random_coin
from .evolution import WalkState, evolve, first_arrival_amplitudes
from .greenfn import GreenRequest, evaluate, evaluate_at, green_function
from .greenfn.reference import (
    SUPERIOR_ARM_SYMBOLS,
    direct_crossing_monomials,
    five_step_crossings,
    grover_diamond_hitting,
    reference_diamond_T_at,
    reference_sixsite_G,
    superior_arm_family,
    symmetric_diamond_h,
    symmetric_diamond_T,
    two_site_coefficients,
)
from .operators import (
    EXACT,
    CoinSymbol,
    PathDescriptor,
    default_symbols,
    hitting_probabilities,
    path_filter,
    step_coefficients,
    symbolic_series,
)
from .topology import BondState, GraphTopology, build_diamond_with_leads, build_line


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    elapsed: float = 0.0
    detail: str = ""
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        txt = f"{status}  {self.name}: residual {self.residual:.3e} (tol {self.tol:.1e}), {self.elapsed:.2f} s"
        if self.limit is not None:
            txt += f" (limit {self.limit:g} s)"
        if self.detail:
            txt += f"  [{self.detail}]"
        return txt


class _Tracker:
    """Collects the worst residual of a check."""

    def __init__(self, tol: float):
        self.tol = tol
        self.worst = 0.0
        self.notes: list[str] = []
        self.ok = True

    def close(self, value: float, what: str = ""):
        value = float(value)
        if not math.isfinite(value) or value > self.worst:
            self.worst = value if math.isfinite(value) else math.inf
        if not value <= self.tol:
            self.ok = False
            if what and len(self.notes) < 3:
                self.notes.append(what)

    def require(self, cond: bool, what: str):
        if not cond:
            self.ok = False
            self.worst = math.inf
            if len(self.notes) < 3:
                self.notes.append(what)


def _timed(name: str, tol: float, limit: float | None, body: Callable[[_Tracker], None]) -> CheckResult:
    tr = _Tracker(tol)
    t0 = time.perf_counter()
    body(tr)
    elapsed = time.perf_counter() - t0
    passed = tr.ok and (limit is None or elapsed < limit)
    detail = "; ".join(tr.notes)
    if limit is not None and elapsed >= limit:
        detail = (detail + "; " if detail else "") + "runtime limit exceeded"
    return CheckResult(name, passed, tr.worst, tol, elapsed, detail, limit)


# --- random inputs ------------------------------------------------------------


def symmetric_coin(dim: int, rng: np.random.Generator) -> tuple[CoinMatrix, complex, complex]:
    """Unitary coin with one reflection ``r`` and one transmission ``t``.

    Such a matrix ``r I + t (J - I)`` has eigenvalues ``r + (dim-1) t`` and
    ``r - t``, so two random phases parametrise all of them.
    """
    ea, eb = cmath.exp(2j * math.pi * rng.random()), cmath.exp(2j * math.pi * rng.random())
    r = (ea + (dim - 1) * eb) / dim
    t = (ea - eb) / dim
    m = np.full((dim, dim), t, dtype=complex)
    np.fill_diagonal(m, r)
    return coin_from_matrix(m), r, t


def random_open_disk(rng: np.random.Generator, radius: float = 0.9) -> complex:
    return radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())


def random_walk_graph(
    rng: np.random.Generator,
    n_core: int,
    extra_edges: int | None = None,
    leads: bool = True,
    extra_sinks: int = 0,
) -> GraphTopology:
    """Random connected core graph, optionally with an entry and an exit lead.

    The core is a random tree on ``n_core`` sites plus ``extra_edges``
    random chords.  With ``leads`` an entry lead (free site + sink) and an
    exit lead are attached to random core sites; marks ``entry`` (the state
    entering the core from the entry lead), ``exit`` (the state entering
    the exit lead) and ``refl`` (the state leaving the core back into the
    entry lead) are set.  ``extra_sinks`` attaches further bare sinks.
    """
    edges = set()
    for k in range(1, n_core):
        edges.add((int(rng.integers(0, k)), k))
    if extra_edges is None:
        extra_edges = int(rng.integers(0, n_core + 1))
    possible = [(a, b) for a in range(n_core) for b in range(a + 1, n_core) if (a, b) not in edges]
    rng.shuffle(possible)
    edges.update(tuple(e) for e in possible[:extra_edges])

    n_sites = n_core
    free = [False] * n_core
    lead_edges = []
    marks_sites = {}
    if leads:
        u, v = int(rng.integers(0, n_core)), int(rng.integers(0, n_core))
        for role, core_site in (("in", u), ("out", v)):
            lead, sink = n_sites, n_sites + 1
            n_sites += 2
            free += [True, True]
            lead_edges += [(core_site, lead), (lead, sink)]
            marks_sites[role] = (core_site, lead)
    for _ in range(extra_sinks):
        lead_edges.append((int(rng.integers(0, n_core)), n_sites))
        free.append(True)
        n_sites += 1

    counter = [0] * n_sites
    bonds = []
    label_of = {}
    for a, b in sorted(edges) + lead_edges:
        counter[a] += 1
        counter[b] += 1
        sa, sb = BondState(a, counter[a]), BondState(b, counter[b])
        label_of[(a, b)] = sa
        label_of[(b, a)] = sb
        bonds.append((sa, sb))
    marks = {}
    if leads:
        u, lead_in = marks_sites["in"]
        v, lead_out = marks_sites["out"]
        # label_of[(x, y)] is x's state for the bond, i.e. entering x from y
        marks = {
            "entry": label_of[(u, lead_in)],
            "refl": label_of[(lead_in, u)],
            "exit": label_of[(lead_out, v)],
        }
    return GraphTopology(counter, bonds, free, marks=marks)


def random_coins(g: GraphTopology, rng: np.random.Generator) -> dict[int, CoinMatrix]:
    return assign(g, lambda k: random_coin(k, rng))


def _eq7_line() -> GraphTopology:
    return build_line(9, free=(0, 8), names=[str(j) for j in range(-4, 5)])


def two_site_line() -> GraphTopology:
    """Line ``j = -2..3`` with scatterers at 0 and 1; ``refl`` exit at ``|-1,-1>``."""
    g = build_line(6, free=(0, 1, 4, 5), names=[str(j) for j in range(-2, 4)])
    return g.with_marks(entry=g.state("0", "+1"), exit=g.state("2", "+1"), refl=g.state("-1", "-1"))


def six_site_line() -> GraphTopology:
    """Line ``j = -4..3`` with scatterers at ``-3..2``."""
    g = build_line(8, free=(0, 7), names=[str(j) for j in range(-4, 4)])
    return g.with_marks(entry=g.state("-2", "+1"), exit=g.state("1", "+1"), refl=g.state("-3", "-1"))


# --- the battery ------------------------------------------------------------------


def check_grover_hitting(tol: float = 1e-12, n_max: int = 23, limit: float | None = 1.0) -> CheckResult:
    """Grover diamond: ``|h_n|^2 = (8/9^{(n+1)/4})^2`` for ``n = 3 mod 4``."""

    def body(tr):
        g = build_diamond_with_leads(1, 1)
        coins = assign(g, coin_grover)
        req = GreenRequest(g.mark("entry"), g.mark("exit"))
        probs = hitting_probabilities(green_function(g, coins, req, exact=True), n_max)
        for n, p in enumerate(probs):
            tr.require(isinstance(p, Fraction) and p == grover_diamond_hitting(n), f"exact n={n}: {p}")
        probs = hitting_probabilities(green_function(g, coins, req), n_max)
        for n, p in enumerate(probs):
            tr.close(abs(p - float(grover_diamond_hitting(n))), f"float n={n}")

    return _timed("grover diamond hitting times", tol, limit, body)


def check_closed_forms(tol: float = 1e-10, seed: int = 0, n_points: int = 20, limit: float | None = 5.0) -> CheckResult:
    """Solver against the diamond, symmetric-diamond and six-site closed forms."""

    def body(tr):
        rng = np.random.default_rng(seed)
        g = build_diamond_with_leads(1, 1)
        req = GreenRequest(g.mark("entry"), g.mark("exit"))
        abcd = [g.site_id(x) for x in "ABCD"]
        coins = random_coins(g, rng)
        rf = green_function(g, coins, req)
        for _ in range(n_points):
            z = random_open_disk(rng)
            tr.close(abs(evaluate_at(rf, z) - reference_diamond_T_at(*(coins[j] for j in abcd), z)), "diamond")

        # symmetric diamond: general closed form, solver and the reduced form
        (ca, ra, ta), (cb, rb, tb) = symmetric_coin(3, rng), symmetric_coin(2, rng)
        scoins = {abcd[0]: ca, abcd[3]: ca, abcd[1]: cb, abcd[2]: cb}
        srf = green_function(g, scoins, req)
        for _ in range(n_points):
            z = random_open_disk(rng)
            closed = symmetric_diamond_T(ta, ra, tb, rb, z)
            tr.close(abs(reference_diamond_T_at(ca, cb, cb, ca, z) - closed), "symmetric reduction")
            tr.close(abs(evaluate_at(srf, z) - closed), "symmetric solver")
        for n, c in enumerate(step_coefficients(srf, 25)):
            tr.close(abs(c - symmetric_diamond_h(ta, ra, tb, rb, n)), "symmetric h_n")

        six = six_site_line()
        coins6 = {j: random_coin(2, rng) for j in range(1, 7)}
        starts = (six.mark("entry"), six.mark("refl"))
        ends = (six.state("1", "+1"), six.state("0", "-1"))
        rfs = [green_function(six, coins6, GreenRequest(a, b, absorbing=False)) for a in starts for b in ends]
        G = reference_sixsite_G([coins6[j] for j in range(1, 7)])
        for _ in range(n_points):
            z = random_open_disk(rng)
            tr.close(abs(sum(evaluate_at(r, z) for r in rfs) - G(z)), "six-site")

    return _timed("closed-form cross-checks", tol, limit, body)


def check_oracle(
    tol: float = 1e-9, seed: int = 0, n_graphs: int = 50, n_max: int = 30, limit: float | None = 60.0
) -> CheckResult:
    """Taylor coefficients of G against direct absorbing evolution on random graphs."""

    def body(tr):
        rng = np.random.default_rng(seed)
        for k in range(n_graphs):
            n_core = int(rng.integers(2, 11))
            g = random_walk_graph(rng, n_core, extra_sinks=int(rng.integers(0, 2)))
            coins = random_coins(g, rng)
            for exit_name in ("exit", "refl"):
                req = GreenRequest(g.mark("entry"), g.mark(exit_name))
                cs = np.array(step_coefficients(green_function(g, coins, req), n_max))
                oracle = first_arrival_amplitudes(g, coins, req.entry, req.exit, n_max)
                tr.close(np.max(np.abs(cs - oracle)), f"graph {k} ({n_core} core sites) {exit_name}")

    return _timed("oracle equivalence on random graphs", tol, limit, body)


def eq7_expected(coins: dict, g: GraphTopology) -> dict[BondState, complex]:
    """The six three-step amplitudes from ``|+1,0>``, written out path by path."""

    def r(s, j):
        c = coins[g.site_id(str(j))].entries
        return c[0, 0] if s > 0 else c[1, 1]

    def t(s, j):
        c = coins[g.site_id(str(j))].entries
        return c[0, 1] if s > 0 else c[1, 0]

    st = g.state
    return {
        st("3", "+1"): t(1, 0) * t(1, 1) * t(1, 2),
        st("1", "+1"): r(1, 0) * r(-1, -1) * t(1, 0) + t(1, 0) * r(1, 1) * r(-1, 0),
        st("-1", "+1"): r(1, 0) * t(-1, -1) * r(-1, -2),
        st("-3", "-1"): r(1, 0) * t(-1, -1) * t(-1, -2),
        st("-1", "-1"): r(1, 0) * r(-1, -1) * r(1, 0) + t(1, 0) * r(1, 1) * t(-1, 0),
        st("1", "-1"): t(1, 0) * t(1, 1) * r(1, 2),
    }


EQ7_SYMBOLIC = {
    ("3", "+1"): [("t_{+1,0}", "t_{+1,1}", "t_{+1,2}")],
    ("1", "+1"): [("r_{+1,0}", "r_{-1,-1}", "t_{+1,0}"), ("t_{+1,0}", "r_{+1,1}", "r_{-1,0}")],
    ("-1", "+1"): [("r_{+1,0}", "t_{-1,-1}", "r_{-1,-2}")],
    ("-3", "-1"): [("r_{+1,0}", "t_{-1,-1}", "t_{-1,-2}")],
    ("-1", "-1"): [("r_{+1,0}", "r_{-1,-1}", "r_{+1,0}"), ("t_{+1,0}", "r_{+1,1}", "t_{-1,0}")],
    ("1", "-1"): [("t_{+1,0}", "t_{+1,1}", "r_{+1,2}")],
}


def check_three_step(tol: float = 1e-12, seed: int = 0, draws: int = 10) -> CheckResult:
    """Three steps from ``|+1,0>``: symbolic path content and numeric amplitudes."""

    def body(tr):
        g = _eq7_line()
        start = g.state("0", "+1")
        for (site, lab), paths in EQ7_SYMBOLIC.items():
            ser = symbolic_series(g, start, g.state(site, lab), 3, absorbing=False)
            got = {m for m in ser.monomials(3)}
            want = {tuple(sorted(p)) for p in paths}
            tr.require(got == want, f"symbolic |{lab},{site}>: {sorted(got)}")
            tr.require(all(c == 1 for n, _, c in ser if n == 3), f"coefficients at |{lab},{site}>")
        rng = np.random.default_rng(seed)
        for _ in range(draws):
            coins = random_coins(g, rng)
            psi = evolve(WalkState.basis(start), 3, g, coins)
            expected = eq7_expected(coins, g)
            tr.require(set(psi.support()) == set(expected), "support differs from the six listed states")
            for s, a in expected.items():
                tr.close(abs(psi.amplitude(s) - a), f"numeric {g.describe(s)}")

    return _timed("three-step golden vector", tol, None, body)


def check_five_step_census() -> CheckResult:
    """The diamond's five-step transmission monomials."""

    def body(tr):
        g = build_diamond_with_leads(1, 1)
        ser = symbolic_series(g, g.mark("entry"), g.mark("exit"), 5)
        got = ser.monomials(5)
        tr.require(got == five_step_crossings(), f"monomials: {sorted(got)}")
        tr.require(len([1 for n, _, _ in ser if n == 5]) == 8, "term count at n = 5 is not 8")
        tr.require(all(c == 1 for n, _, c in ser if n == 5), "coefficients are not all 1")

    return _timed("five-step path census", 0.0, None, body)


def diamond_symbol(g: GraphTopology, site: str, a: str, b: str) -> CoinSymbol:
    j = g.site_id(site)
    return CoinSymbol.of(j, g.direction_id(j, a), g.direction_id(j, b))


def merged_diamond_symbols(g: GraphTopology) -> dict[CoinSymbol, str]:
    """One ``t`` and one ``r`` variable per site ``B`` and ``C``; others distinct."""
    symbols = default_symbols(g)
    for s in symbols:
        if g.names[s.site] in ("B", "C"):
            symbols[s] = f"{s.kind}_{g.names[s.site]}"
    return symbols


def direct_crossing_filter(series, g: GraphTopology):
    """Sum of the two exact-mode filters selecting straight crossings."""
    sym = lambda *a: diamond_symbol(g, *a)  # noqa: E731
    upper = PathDescriptor(((sym("B", "+", "-"), 1),), EXACT, exempt=(sym("A", "0", "+"), sym("D", "+", "0")))
    lower = PathDescriptor(((sym("C", "+", "-"), 1),), EXACT, exempt=(sym("A", "0", "-"), sym("D", "-", "0")))
    return path_filter(series, upper) + path_filter(series, lower)


def superior_family_filter(series, g: GraphTopology, n: int):
    sym = lambda *a: diamond_symbol(g, *a)  # noqa: E731
    exempt = (sym("A", "0", "+"), sym("D", "+", "0"), sym("A", "+", "+"), sym("D", "+", "+"), "r_B")
    return path_filter(series, PathDescriptor((("t_B", n),), EXACT, exempt=exempt))


def check_path_filters(order: int = 24) -> CheckResult:
    """Direct-crossing filter and the superior-arm ``t_B^n`` families."""

    def body(tr):
        g = build_diamond_with_leads(1, 1)
        entry, exit = g.mark("entry"), g.mark("exit")
        ser = symbolic_series(g, entry, exit, 7)
        direct = direct_crossing_filter(ser, g)
        tr.require(
            direct.monomials() == direct_crossing_monomials() and direct.orders() == [3] and len(direct) == 2,
            f"direct crossings: {direct}",
        )
        symbols = merged_diamond_symbols(g)
        ser = symbolic_series(g, entry, exit, order, symbols=symbols)
        sym = lambda *a: symbols[diamond_symbol(g, *a)]  # noqa: E731
        names = dict(zip(SUPERIOR_ARM_SYMBOLS, (sym("A", "0", "+"), sym("A", "+", "+"), "t_B", "r_B", sym("D", "+", "+"), sym("D", "+", "0"))))
        for n in range(0, (order - 1) // 2 + 2):
            fam = superior_family_filter(ser, g, n)
            got: dict[int, dict] = {}
            for k, exps, c in fam:
                key = tuple(exps.get(names[s], 0) for s in SUPERIOR_ARM_SYMBOLS)
                tr.require(sum(key) == sum(exps.values()), f"n={n}: foreign symbol in {exps}")
                got.setdefault(k, {})[key] = c
            want = superior_arm_family(n, order)
            if n % 2 == 0:
                tr.require(len(fam) == 0, f"even family n={n} is not empty")
            tr.require(got == want, f"family n={n} differs from its closed form")

    return _timed("path-filter golden vectors", 0.0, None, body)


def check_conservation(tol: float = 1e-9, seed: int = 0, limit: float | None = None) -> CheckResult:
    """Norm, stationary flux and first-passage normalisation."""

    def body(tr):
        rng = np.random.default_rng(seed)
        # norm preservation, 1e-12 per step
        g = random_walk_graph(rng, 8, leads=False)
        coins = random_coins(g, rng)
        start = g.states()[int(rng.integers(0, len(g.states())))]
        psi = WalkState.basis(start)
        for n in range(1, 51):
            psi = evolve(psi, 1, g, coins)
            tr.require(abs(psi.norm2() - 1.0) <= 1e-12 * n, f"norm after {n} steps")

        # stationary flux on the diamond
        g = build_diamond_with_leads(1, 1)
        coins = random_coins(g, rng)
        T = green_function(g, coins, GreenRequest(g.mark("entry"), g.mark("exit")))
        R = green_function(g, coins, GreenRequest(g.mark("entry"), g.mark("refl"), "refl"))
        for _ in range(50):
            gamma = 2 * math.pi * rng.random()
            tr.close(abs(abs(evaluate(T, gamma)) ** 2 + abs(evaluate(R, gamma)) ** 2 - 1.0), "flux")

        # first-passage shares for Grover coins
        coins = assign(g, coin_grover)
        n_max = 80
        pt = hitting_probabilities(
            green_function(g, coins, GreenRequest(g.mark("entry"), g.mark("exit")), exact=True), n_max
        )
        pr = hitting_probabilities(
            green_function(g, coins, GreenRequest(g.mark("entry"), g.mark("refl"), "refl"), exact=True), n_max
        )
        total = Fraction(0)
        for a, b in zip(pt, pr):
            new = total + a + b
            tr.require(new >= total and new <= 1, "cumulative first-passage probability")
            total = new
        tr.close(abs(float(sum(pt)) - 0.8), "transmission share")
        tr.close(abs(float(sum(pr)) - 0.2), "reflection share")

    return _timed("conservation suite", tol, limit, body)


def check_two_site(tol: float = 1e-10, seed: int = 0, draws: int = 10) -> CheckResult:
    """Two scatterers on a line: ``r, t, a, b`` from four Green functions."""

    def body(tr):
        rng = np.random.default_rng(seed)
        g = two_site_line()
        entry = g.mark("entry")
        refl = GreenRequest(entry, g.mark("refl"), "refl")
        trans = GreenRequest(entry, g.mark("exit"))
        inner_a = GreenRequest(entry, g.state("0", "-1"), absorbing=False)
        inner_b = GreenRequest(entry, g.state("1", "+1"), absorbing=False)
        for _ in range(draws):
            coins = {g.site_id("0"): random_coin(2, rng), g.site_id("1"): random_coin(2, rng)}
            gamma = 2 * math.pi * rng.random()
            z = cmath.exp(1j * gamma)
            ref = two_site_coefficients(coins[g.site_id("0")], coins[g.site_id("1")], gamma)
            # lead offsets: the reflected state sits one step out, the
            # transmitted one two steps, and |+1,1> one step in
            tr.close(abs(evaluate(green_function(g, coins, refl), gamma) / z - ref["r"]), "r")
            tr.close(abs(evaluate(green_function(g, coins, trans), gamma) / z**2 - ref["t"]), "t")
            tr.close(abs(evaluate(green_function(g, coins, inner_a), gamma) - ref["a"]), "a")
            tr.close(abs(evaluate(green_function(g, coins, inner_b), gamma) / z - ref["b"]), "b")

    return _timed("two-site coefficients", tol, None, body)


def check_shipped_specs(tol: float = 1e-9, n_max: int = 30) -> CheckResult:
    """Oracle agreement for every mark pair of every bundled spec file."""
    from . import specfile

    def body(tr):
        for name in specfile.shipped_names():
            g, coins = specfile.load(specfile.shipped(name))
            for exit_name in ("exit", "refl"):
                req = GreenRequest(g.mark("entry"), g.mark(exit_name))
                cs = np.array(step_coefficients(green_function(g, coins, req), n_max))
                oracle = first_arrival_amplitudes(g, coins, req.entry, req.exit, n_max)
                tr.close(np.max(np.abs(cs - oracle)), f"{name} {exit_name}")

    return _timed("shipped spec files", tol, None, body)


def run_all(tol: float | None = None, seed: int = 0) -> list[CheckResult]:
    """Whole battery; ``tol`` overrides every numeric tolerance."""

    def t(default):
        return default if tol is None else tol

    return [
        check_grover_hitting(tol=t(1e-12)),
        check_closed_forms(tol=t(1e-10), seed=seed),
        check_oracle(tol=t(1e-9), seed=seed),
        check_three_step(tol=t(1e-12), seed=seed),
        check_five_step_census(),
        check_path_filters(),
        check_conservation(tol=t(1e-9), seed=seed),
        check_two_site(tol=t(1e-10), seed=seed),
        check_shipped_specs(tol=t(1e-9)),
    ]
