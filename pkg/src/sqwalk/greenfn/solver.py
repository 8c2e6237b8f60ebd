"""Bond-to-bond Green function as an exact rational function of z.

The Green function between an entry and an exit bond state is

    G(z) = sum_n c_n z^n = e_exit^T (I - z M)^{-1} e_entry,

where ``M`` is the one-step transfer matrix.  With an absorbing exit (its
outgoing column zeroed) ``c_n`` is the first-arrival amplitude at step
``n``; without it, ``c_n`` is the plain ``n``-step amplitude.

The linear system is solved over polynomials in ``z`` by fraction-free
(Bareiss) elimination.  Every leading principal minor of ``I - zM`` equals
one at ``z = 0``, so no pivoting is ever needed and every Bareiss division
is exact.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .. import exact as ex
from ..coins import CoinMatrix, exact_site_matrices, site_matrices
from ..errors import DegenerateRequestError, PoleError
from ..topology import BondState, GraphTopology
from .polynomial import Polynomial, RationalFunction

MODES = ("trans", "refl")
# float coefficients below this fraction of the largest one are rounding noise
FLOAT_TRIM = 1e-14
_MODE_ALIASES = {"trans": "trans", "transmission": "trans", "refl": "refl", "reflection": "refl"}


@dataclass(frozen=True)
class GreenRequest:
    """Which Green function to compute.

    ``mode`` labels the request (transmission or reflection) and is carried
    into outputs; the physics is fully fixed by ``entry`` and ``exit``.
    ``absorbing=False`` gives the visit-amplitude generating function of an
    interior bond instead of first arrivals.
    """

    entry: BondState
    exit: BondState
    mode: str = "trans"
    absorbing: bool = True

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", _MODE_ALIASES[self.mode])
        except KeyError:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}") from None


def transfer_matrix(g: GraphTopology, coins: Mapping[int, CoinMatrix], exact: bool = False):
    """One-step matrix ``M[out, in]`` over bond states in canonical order.

    Float mode returns a complex ndarray; exact mode a list of row lists
    of QQ_I values.  Columns of states entering a lead sink are zero.
    """
    states = g.states()
    n = len(states)
    mats = exact_site_matrices(g, coins) if exact else site_matrices(g, coins)
    if exact:
        m = [[ex.ZERO] * n for _ in range(n)]
    else:
        m = np.zeros((n, n), dtype=complex)
    for col, s in enumerate(states):
        gamma = mats[s.site]
        if gamma is None:
            continue
        row = gamma[s.direction - 1]
        for l in range(1, g.valence[s.site] + 1):
            w = row[l - 1]
            if not w:
                continue
            out = g.index(g.partner(BondState(s.site, l)))
            if exact:
                m[out][col] = w
            else:
                m[out, col] = w
    return m


def _core(m_nonzero: list[list[int]], entry: int, exit: int) -> list[int]:
    """States reachable from ``entry`` that can still reach ``exit``."""
    n = len(m_nonzero)
    succ: list[list[int]] = [[] for _ in range(n)]
    pred: list[list[int]] = [[] for _ in range(n)]
    for col in range(n):
        for row in m_nonzero[col]:
            succ[col].append(row)
            pred[row].append(col)

    def reach(start, nbrs):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    fwd = reach(entry, succ)
    if exit not in fwd:
        return []
    keep = fwd & reach(exit, pred)
    return sorted(keep)


# --- float Bareiss ----------------------------------------------------------


def _conv(x: np.ndarray, y: np.ndarray, length: int) -> np.ndarray:
    """Batched polynomial product truncated to ``length`` coefficients."""
    size = 1 << (2 * length - 1).bit_length()
    fx = np.fft.fft(x, size, axis=-1)
    fy = np.fft.fft(y, size, axis=-1)
    return np.fft.ifft(fx * fy, axis=-1)[..., :length]


def _series_inverse(p: np.ndarray, length: int) -> np.ndarray:
    """Taylor coefficients of ``1/p`` for ``p[0] = 1``."""
    inv = np.zeros(length, dtype=complex)
    inv[0] = 1.0
    for k in range(1, length):
        for i in range(1, min(k, len(p) - 1) + 1):
            inv[k] -= p[i] * inv[k - i]
    return inv


def _bareiss_float(mc: np.ndarray, entry: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``(I - z mc) a = e_entry`` for the last component.

    Returns coefficient arrays ``(numerator, determinant)``.
    """
    n = mc.shape[0]
    length = n + 2
    t = np.zeros((n, n + 1, length), dtype=complex)
    t[:, :n, 1] = -mc
    t[np.arange(n), np.arange(n), 0] = 1.0
    t[entry, n, 0] = 1.0
    prev_inv = None
    for k in range(n - 1):
        piv = t[k, k]
        sub = t[k + 1 :, k + 1 :]
        cross = _conv(t[k + 1 :, k][:, None, :], t[k, k + 1 :][None, :, :], length)
        new = _conv(piv[None, None, :], sub, length) - cross
        if prev_inv is not None:
            new = _conv(prev_inv[None, None, :], new, length)
        new[..., k + 3 :] = 0.0
        t[k + 1 :, k + 1 :] = new
        prev_inv = _series_inverse(piv[: k + 2], length)
    return t[n - 1, n, : n + 1].copy(), t[n - 1, n - 1, : n + 1].copy()


# --- exact Bareiss ------------------------------------------------------------


def _bareiss_exact(mc: list[list], entry: int) -> tuple[Polynomial, Polynomial]:
    n = len(mc)
    rows: list[list[Polynomial]] = []
    for i in range(n):
        row = []
        for j in range(n):
            c0 = ex.ONE if i == j else ex.ZERO
            row.append(Polynomial([c0, -mc[i][j]]))
        row.append(Polynomial([ex.ONE if i == entry else ex.ZERO]))
        rows.append(row)
    prev = Polynomial([ex.ONE])
    for k in range(n - 1):
        piv = rows[k][k]
        for i in range(k + 1, n):
            lead = rows[i][k]
            for j in range(k + 1, n + 1):
                val = piv * rows[i][j]
                if not lead.is_zero() and not rows[k][j].is_zero():
                    val = val - lead * rows[k][j]
                rows[i][j] = val.exact_div(prev) if prev.degree > 0 else val.scale(1 / prev[0])
        prev = piv
    return rows[n - 1][n], rows[n - 1][n - 1]


# --- public entry points -------------------------------------------------------


def green_function(
    g: GraphTopology,
    coins: Mapping[int, CoinMatrix],
    req: GreenRequest,
    exact: bool = False,
) -> RationalFunction:
    """Green function ``G_z`` from ``req.entry`` to ``req.exit``.

    Parameters
    ----------
    g, coins : the walk
    req : GreenRequest
    exact : bool
        Work over Gaussian rationals (every coin needs an exact copy).  The
        result is then reduced to lowest terms; float results are not.

    Returns
    -------
    RationalFunction
        Normalised so that the denominator's constant term is one.
    """
    if req.entry == req.exit:
        raise DegenerateRequestError("entry and exit coincide; G is trivially 1 at n = 0")
    i_in, i_out = g.index(req.entry), g.index(req.exit)
    m = transfer_matrix(g, coins, exact=exact)
    n = len(g.states())
    if exact:
        if req.absorbing:
            for row in m:
                row[i_out] = ex.ZERO
        nonzero = [[r for r in range(n) if m[r][c]] for c in range(n)]
    else:
        if req.absorbing:
            m[:, i_out] = 0.0
        nonzero = [list(np.flatnonzero(m[:, c])) for c in range(n)]

    core = _core(nonzero, i_in, i_out)
    one = ex.ONE if exact else 1.0 + 0j
    if not core:
        return RationalFunction(Polynomial(), Polynomial([one]))
    # exit goes last so that its component is what Bareiss leaves behind
    order = [s for s in core if s != i_out] + [i_out]
    entry_pos = order.index(i_in)
    if exact:
        mc = [[m[r][c] for c in order] for r in order]
        num, den = _bareiss_exact(mc, entry_pos)
        rf = RationalFunction(num, den).reduced()
    else:
        mc = m[np.ix_(order, order)]
        num, den = _bareiss_float(mc, entry_pos)
        rf = RationalFunction(
            Polynomial(num.tolist()).trimmed(FLOAT_TRIM), Polynomial(den.tolist()).trimmed(FLOAT_TRIM)
        )
    bound = len(order)
    assert rf.numerator.degree <= bound and rf.denominator.degree <= bound, "degree bound violated"
    return rf


def _taylor_at(coeffs, z: complex) -> list[complex]:
    """``p^(k)(z) / k!`` for every ``k`` (repeated synthetic division)."""
    work = [complex(c) for c in coeffs]
    out = []
    while work:
        acc = 0j
        rest = []
        for c in reversed(work):
            acc = acc * z + c
            rest.append(acc)
        out.append(rest.pop())
        work = rest[::-1]
    return out


def evaluate(rf: RationalFunction, gamma: float, tol: float = 1e-12) -> complex:
    """``G`` at ``z = e^{i gamma}``; a (numerical) pole raises PoleError.

    Float results are not reduced, so numerator and denominator may share a
    root on the unit circle.  Such a removable point is resolved by
    comparing Taylor expansions around it; only a genuine pole raises.
    """
    z = cmath.exp(1j * gamma)
    f = rf.to_complex() if rf.is_exact else rf
    n_scale = max((abs(c) for c in f.numerator), default=0.0) or 1.0
    d_scale = max((abs(c) for c in f.denominator), default=1.0)
    den = f.denominator(z)
    if abs(den) > tol * d_scale:
        return complex(f.numerator(z) / den)
    dk = _taylor_at(f.denominator.coeffs, z)
    nk = _taylor_at(f.numerator.coeffs, z) + [0j] * len(dk)
    for k, d in enumerate(dk):
        if abs(d) > tol * d_scale:
            if any(abs(c) > tol * n_scale for c in nk[:k]):
                break
            return complex(nk[k] / d)
    raise PoleError(f"G has a pole at gamma = {gamma!r}", abs(den))


def evaluate_at(rf: RationalFunction, z: complex) -> complex:
    """``G`` at an arbitrary complex ``z``."""
    f = rf.to_complex() if rf.is_exact else rf
    return complex(f.numerator(z) / f.denominator(z))
