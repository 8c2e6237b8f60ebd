"""Per-site scattering matrices (coins).

``CoinMatrix.entries[i, l]`` is the amplitude for a state arriving at the
site along its ``i``-th direction to leave along its ``l``-th direction:
diagonal entries are reflections ``r``, off-diagonal ones transmissions
``t``.  For the line convention (direction 1 = ``+1``, 2 = ``-1``)::

    [[r_{+1}, t_{+1}],
     [t_{-1}, r_{-1}]]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import exact as ex
from .errors import CoinError, SingularParameterError, SpecParseError
from .topology import GraphTopology

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoinMatrix:
    """Unitary ``K x K`` scattering matrix.

    ``exact`` optionally holds the same entries as Gaussian rationals; it is
    set by constructors whose output is exactly representable (Grover coins,
    matrices given with rational entries) and enables exact Green functions.
    """

    entries: np.ndarray
    exact: tuple | None = field(default=None)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def r(self, i: int) -> complex:
        """Reflection amplitude for direction ``i`` (1-based)."""
        return self.entries[i - 1, i - 1]

    def t(self, i: int, l: int) -> complex:
        """Transmission amplitude from direction ``i`` to ``l`` (1-based)."""
        if i == l:
            raise ValueError("transmission needs two distinct directions")
        return self.entries[i - 1, l - 1]

    def amplitude(self, i: int, l: int, exact: bool = False):
        if exact:
            if self.exact is None:
                raise CoinError("coin has no exact representation")
            return self.exact[i - 1][l - 1]
        return complex(self.entries[i - 1, l - 1])

    def is_time_reversal_invariant(self, tol: float = UNITARY_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.T), initial=0.0) <= tol)

    def __eq__(self, other):
        if not isinstance(other, CoinMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.all(self.entries == other.entries))

    def __repr__(self):
        return f"CoinMatrix(dim={self.dim}, exact={self.exact is not None})"


@dataclass(frozen=True)
class PointInteractionParams:
    """General zero-range interaction; requires ``a*d - b*c = 1``."""

    a: float
    b: float
    c: float
    d: float
    e: float = 0.0
    theta: float = 0.0
    k: float = 1.0

    def check(self, tol: float = 1e-12):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > tol:
            raise CoinError(f"point interaction needs a*d - b*c = 1, got {det!r}")
        if not 0.0 <= self.theta < 2 * np.pi:
            raise CoinError(f"theta must lie in [0, 2*pi), got {self.theta!r}")


def unitarity_residual(m: np.ndarray) -> float:
    """max-norm of ``M M^+ - 1`` and ``M^+ M - 1``."""
    eye = np.eye(m.shape[0])
    return float(
        max(
            np.max(np.abs(m @ m.conj().T - eye), initial=0.0),
            np.max(np.abs(m.conj().T @ m - eye), initial=0.0),
        )
    )


def _explicit_relations_residual(m: np.ndarray) -> float:
    # Row relations written out term by term: normalisation of each incoming
    # direction and orthogonality of each pair; columns likewise.
    k = m.shape[0]
    worst = 0.0
    for i in range(k):
        norm = abs(m[i, i]) ** 2 + sum(abs(m[i, l]) ** 2 for l in range(k) if l != i)
        worst = max(worst, abs(norm - 1.0))
        col = abs(m[i, i]) ** 2 + sum(abs(m[l, i]) ** 2 for l in range(k) if l != i)
        worst = max(worst, abs(col - 1.0))
        for l in range(k):
            if l == i:
                continue
            rows = (
                sum(m[i, n] * np.conj(m[l, n]) for n in range(k) if n not in (i, l))
                + m[i, i] * np.conj(m[l, i])
                + np.conj(m[l, l]) * m[i, l]
            )
            cols = (
                sum(np.conj(m[n, i]) * m[n, l] for n in range(k) if n not in (i, l))
                + np.conj(m[i, i]) * m[i, l]
                + np.conj(m[l, i]) * m[l, l]
            )
            worst = max(worst, abs(rows), abs(cols))
    if k == 2:
        rp, tp, tm, rm = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        worst = max(
            worst,
            abs(rp * np.conj(tp) + np.conj(rm) * tm),
            abs(rp * np.conj(tm) + np.conj(rm) * tp),
            abs(abs(tp) ** 2 + abs(rp) ** 2 - 1),
            abs(abs(tm) ** 2 + abs(rm) ** 2 - 1),
            abs(abs(tp) ** 2 + abs(rm) ** 2 - 1),
            abs(abs(tm) ** 2 + abs(rp) ** 2 - 1),
        )
    return float(worst)


def validate_unitarity(coin: CoinMatrix) -> float:
    """Largest violation of unitarity, matrix form and explicit sums combined."""
    return max(unitarity_residual(coin.entries), _explicit_relations_residual(coin.entries))


def _checked(entries: np.ndarray, exact=None, tol: float = UNITARY_TOL) -> CoinMatrix:
    coin = CoinMatrix(entries, exact)
    res = unitarity_residual(entries)
    if not res <= tol:
        raise CoinError(f"coin is not unitary: max |G G^+ - 1| entry = {res:.3e}")
    entries.setflags(write=False)
    return coin


def coin_1d(rho: float, phi: float, varphi: float) -> CoinMatrix:
    """Two-direction coin ``t_s = rho e^{i s phi}``, ``r_s = s sqrt(1-rho^2) e^{i s varphi}``."""
    if not 0.0 <= rho <= 1.0:
        raise CoinError(f"rho must lie in [0, 1], got {rho!r}")
    s = np.sqrt(1.0 - rho * rho)
    t_p, t_m = rho * np.exp(1j * phi), rho * np.exp(-1j * phi)
    r_p, r_m = s * np.exp(1j * varphi), -s * np.exp(-1j * varphi)
    return _checked(np.array([[r_p, t_p], [t_m, r_m]], dtype=complex))


def point_interaction_amplitudes(p: PointInteractionParams, k: float | None = None):
    """``(r_plus, r_minus, t_plus, t_minus)`` of a point interaction at wave number ``k``."""
    k = p.k if k is None else k
    den = -p.c + 1j * k * (p.d + p.a) + p.b * k * k
    if abs(den) < 1e-300:
        raise SingularParameterError(f"amplitude denominator vanishes at k={k!r}")
    r_p = (p.c + 1j * k * (p.d - p.a) + p.b * k * k) / den * np.exp(1j * k * p.e)
    r_m = (p.c - 1j * k * (p.d - p.a) + p.b * k * k) / den * np.exp(-1j * k * p.e)
    t_p = 2j * k * np.exp(1j * p.theta) / den
    t_m = 2j * k * np.exp(-1j * p.theta) / den
    return r_p, r_m, t_p, t_m


def coin_point_interaction(p: PointInteractionParams) -> CoinMatrix:
    """Coin from the reflection/transmission amplitudes of a zero-range potential."""
    p.check()
    r_p, r_m, t_p, t_m = point_interaction_amplitudes(p)
    return _checked(np.array([[r_p, t_p], [t_m, r_m]], dtype=complex))


def point_interaction_conjugation_residual(p: PointInteractionParams) -> float:
    """Violation of ``r(k) = r*(-k)`` and ``t_pm(k) = t_mp*(-k)``."""
    rp, rm, tp, tm = point_interaction_amplitudes(p, p.k)
    rp_, rm_, tp_, tm_ = point_interaction_amplitudes(p, -p.k)
    return float(max(abs(rp - np.conj(rp_)), abs(rm - np.conj(rm_)), abs(tp - np.conj(tm_)), abs(tm - np.conj(tp_))))


def coin_grover(dim: int) -> CoinMatrix:
    """Grover coin: ``-1 + 2/dim`` on the diagonal, ``2/dim`` elsewhere."""
    if not isinstance(dim, int) or dim < 1:
        raise CoinError(f"Grover coin needs dim >= 1, got {dim!r}")
    off = Fraction(2, dim)
    diag = off - 1
    exact = tuple(tuple(ex.gaussian(diag if i == l else off) for l in range(dim)) for i in range(dim))
    entries = np.full((dim, dim), float(off), dtype=complex)
    np.fill_diagonal(entries, float(diag))
    return _checked(entries, exact)


def coin_from_matrix(entries, tol: float = UNITARY_TOL, time_reversal: bool = False) -> CoinMatrix:
    """Accept any square unitary matrix.

    Entries may be numbers or exact values (ints, Fractions, ``"p/q"``
    strings, QQ_I); when every entry is exact the coin keeps an exact copy.
    """
    rows = [list(r) for r in entries]
    k = len(rows)
    if k == 0 or any(len(r) != k for r in rows):
        raise CoinError("coin matrix must be square and non-empty")
    exact = None
    try:
        exact = tuple(tuple(ex.to_exact(v) for v in r) for r in rows)
    except (TypeError, ValueError):
        exact = None
    if exact is not None:
        m = np.array([[ex.to_complex(v) for v in r] for r in exact], dtype=complex)
    else:
        m = np.array([[complex(v) for v in r] for r in rows], dtype=complex)
    coin = _checked(m, exact, tol)
    if time_reversal and not coin.is_time_reversal_invariant(tol):
        raise CoinError("coin violates time-reversal symmetry t_il = t_li")
    return coin


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_coin(dim: int, rng: np.random.Generator) -> CoinMatrix:
    return _checked(random_unitary(dim, rng))


# --- site assignment -------------------------------------------------------

_SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def site_matrices(g: GraphTopology, coins: Mapping[int, CoinMatrix]) -> list[np.ndarray | None]:
    """Per-site scattering matrix, ``None`` for sinks.

    Free sites of valence 2 always use perfect transmission; every other
    site needs a coin of matching dimension.
    """
    out: list[np.ndarray | None] = []
    for j in range(g.num_sites):
        if g.free[j]:
            out.append(None if g.valence[j] == 1 else _SWAP)
            continue
        coin = coins.get(j)
        if coin is None:
            raise CoinError(f"no coin assigned to non-free site {j} ({g.names[j]})")
        if coin.dim != g.valence[j]:
            raise CoinError(f"coin at site {j} has dim {coin.dim}, valence is {g.valence[j]}")
        out.append(coin.entries)
    return out


def exact_site_matrices(g: GraphTopology, coins: Mapping[int, CoinMatrix]) -> list[tuple | None]:
    site_matrices(g, coins)
    out = []
    for j in range(g.num_sites):
        if g.free[j]:
            out.append(None if g.valence[j] == 1 else ((ex.ZERO, ex.ONE), (ex.ONE, ex.ZERO)))
            continue
        coin = coins[j]
        if coin.exact is None:
            raise CoinError(f"coin at site {j} ({g.names[j]}) has no exact representation")
        out.append(coin.exact)
    return out


# --- graph-spec coins block --------------------------------------------------


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecParseError(f"expected a number, got {value!r}", field=where)
    return float(value)


def _matrix_entry(pair, where):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise SpecParseError("matrix entries must be [re, im] pairs", field=where)
    for v in pair:
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise SpecParseError(f"bad matrix component {v!r}", field=where)
    if any(isinstance(v, float) for v in pair):
        return complex(float(pair[0]), float(pair[1]))
    try:
        return ex.gaussian(*pair)
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"bad rational in {pair!r}", field=where) from None


def coin_from_doc(entry: dict, valence: int, where: str) -> CoinMatrix:
    kind = entry.get("kind")
    try:
        if kind == "grover":
            return coin_grover(int(entry.get("dim", valence)))
        if kind == "coin1d":
            return coin_1d(
                _number(entry.get("rho"), f"{where}.rho"),
                _number(entry.get("phi", 0.0), f"{where}.phi"),
                _number(entry.get("varphi", 0.0), f"{where}.varphi"),
            )
        if kind == "point":
            p = PointInteractionParams(**{
                key: _number(entry.get(key, default), f"{where}.{key}")
                for key, default in (("a", None), ("b", None), ("c", None), ("d", None),
                                     ("e", 0.0), ("theta", 0.0), ("k", 1.0))
            })
            return coin_point_interaction(p)
        if kind == "matrix":
            raw = entry.get("entries")
            if not isinstance(raw, list):
                raise SpecParseError("matrix coin needs an entries list", field=f"{where}.entries")
            if raw and all(isinstance(r, list) and r and isinstance(r[0], list) for r in raw):
                rows = raw
            else:
                if len(raw) != valence * valence:
                    raise SpecParseError(f"expected {valence * valence} row-major entries", field=f"{where}.entries")
                rows = [raw[i * valence:(i + 1) * valence] for i in range(valence)]
            vals = [[_matrix_entry(v, f"{where}.entries[{i}][{l}]") for l, v in enumerate(r)] for i, r in enumerate(rows)]
            if any(not ex.is_exact(v) for r in vals for v in r):
                vals = [[ex.to_complex(v) for v in r] for r in vals]
            return coin_from_matrix(vals, time_reversal=bool(entry.get("time_reversal", False)))
    except CoinError as exc:
        raise SpecParseError(str(exc), field=where) from None
    raise SpecParseError(f"unknown coin kind {kind!r}", field=f"{where}.kind")


def coins_from_doc(doc: dict, g: GraphTopology) -> dict[int, CoinMatrix]:
    block = doc.get("coins", [])
    if not isinstance(block, list):
        raise SpecParseError("coins must be a list", field="coins")
    coins: dict[int, CoinMatrix] = {}
    for n, entry in enumerate(block):
        where = f"coins[{n}]"
        if not isinstance(entry, dict) or "site" not in entry:
            raise SpecParseError("coin entry needs a site", field=where)
        try:
            j = g.site_id(entry["site"])
        except Exception:
            raise SpecParseError(f"coin for unknown site {entry['site']!r}", field=f"{where}.site") from None
        if j in coins:
            raise SpecParseError(f"site {j} has two coins", field=where)
        coin = coin_from_doc(entry, g.valence[j], where)
        if coin.dim != g.valence[j]:
            raise SpecParseError(f"coin dim {coin.dim} does not match valence {g.valence[j]}", field=where)
        coins[j] = coin
    for j in range(g.num_sites):
        if not g.free[j] and j not in coins:
            raise SpecParseError(f"non-free site {j} ({g.names[j]}) has no coin", field="coins")
    return coins


def coin_to_doc(site: int, coin: CoinMatrix) -> dict:
    if coin.exact is not None:
        rows = [[[str(p) for p in ex.parts(v)] for v in r] for r in coin.exact]
    else:
        rows = [[[float(v.real), float(v.imag)] for v in r] for r in coin.entries]
    return {"site": site, "kind": "matrix", "entries": rows}


def coins_to_doc(coins: Mapping[int, CoinMatrix]) -> list:
    return [coin_to_doc(j, coins[j]) for j in sorted(coins)]


def assign(g: GraphTopology, factory, sites: Sequence[int] | None = None) -> dict[int, CoinMatrix]:
    """Coin for every non-free site from ``factory(valence)``."""
    sites = [j for j in range(g.num_sites) if not g.free[j]] if sites is None else sites
    return {j: factory(g.valence[j]) for j in sites}
