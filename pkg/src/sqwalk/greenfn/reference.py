"""Hand-derived closed forms used to cross-check the general solver.

Each formula is written once against plain arithmetic on ``z``, so the same
code evaluates at a complex number or, given ``z`` as a RationalFunction,
builds the rational function itself.  Coin amplitudes follow the package
convention ``coin[in, out]`` with the direction labels of
:func:`sqwalk.topology.build_diamond_with_leads` and
:func:`sqwalk.topology.build_line`.
"""

from __future__ import annotations

from collections import defaultdict
from math import comb
from typing import Callable, Sequence

from .. import exact as ex
from ..coins import CoinMatrix
from .polynomial import Polynomial, RationalFunction

# direction indices at the diamond sites
_A_LAB = {"0": 1, "+": 2, "-": 3}
_BC_LAB = {"+": 1, "-": 2}


def _variable(exact: bool) -> RationalFunction:
    zero, one = (ex.ZERO, ex.ONE) if exact else (0j, 1.0 + 0j)
    return RationalFunction(Polynomial([zero, one]), Polynomial([one]))


def _amp(coin: CoinMatrix, exact: bool, labels: dict):
    def get(i: str, l: str):
        return coin.amplitude(labels[i], labels[l], exact=exact)

    return get


def _diamond_T(A, B, C, D, z, one):
    """Global transmission amplitude of the diamond, built from its arms."""
    z2 = z * z

    def arm(X, Y, s):
        # amplitudes for a walker sent from A into arm X (the other arm is
        # Y); ``s`` is D's label toward X and ``o`` D's label toward Y
        o = "-" if s == "+" else "+"
        f = (one - B("-", "-") * D("+", "+") * z2) * (one - C("-", "-") * D("-", "-") * z2) - D(
            "+", "-"
        ) * D("-", "+") * B("-", "-") * C("-", "-") * z2 * z2
        T_0 = X("+", "-") * (D(s, "0") + Y("-", "-") * (D(s, o) * D(o, "0") - D(o, o) * D(s, "0")) * z2) * z / f
        T_cross = X("+", "-") * D(s, o) * Y("-", "+") * z2 / f
        R_same = X("+", "+") + X("+", "-") * (
            X("-", "+") * D(s, s) + X("-", "+") * Y("-", "-") * (D(o, s) * D(s, o) - D(s, s) * D(o, o)) * z2
        ) * z2 / f
        return T_0, T_cross, R_same

    Tp0, Tpm, Rpp = arm(B, C, "+")
    Tm0, Tmp, Rmm = arm(C, B, "-")
    g = (one - (Tpm * A("-", "+") + Rpp * A("+", "+")) * z2) * (one - (Tmp * A("+", "-") + Rmm * A("-", "-")) * z2) - (
        Tpm * A("-", "-") + Rpp * A("+", "-")
    ) * (Tmp * A("+", "+") + Rmm * A("-", "+")) * z2 * z2
    Pp = Tp0 + (Tm0 * (Tpm * A("-", "-") + Rpp * A("+", "-")) - Tp0 * (Tmp * A("+", "-") + Rmm * A("-", "-"))) * z2
    Pm = Tm0 + (Tp0 * (Tmp * A("+", "+") + Rmm * A("-", "+")) - Tm0 * (Tpm * A("-", "+") + Rpp * A("+", "+"))) * z2
    return (A("0", "+") * Pp + A("0", "-") * Pm) / g * z2


def reference_diamond_T(
    coin_a: CoinMatrix,
    coin_b: CoinMatrix,
    coin_c: CoinMatrix,
    coin_d: CoinMatrix,
    exact: bool = False,
) -> RationalFunction:
    """Closed-form transmission ``T_z`` through the diamond ``A-{B,C}-D``.

    The walker enters ``A`` along label ``0`` and is collected when it
    leaves ``D`` along label ``0``.  Exact mode returns lowest terms.
    """
    one = ex.ONE if exact else 1.0 + 0j
    A = _amp(coin_a, exact, _A_LAB)
    D = _amp(coin_d, exact, _A_LAB)
    B = _amp(coin_b, exact, _BC_LAB)
    C = _amp(coin_c, exact, _BC_LAB)
    rf = _diamond_T(A, B, C, D, _variable(exact), one)
    return rf.reduced() if exact else rf


def reference_diamond_T_at(coin_a, coin_b, coin_c, coin_d, z: complex) -> complex:
    """Same closed form evaluated directly at a complex ``z``."""
    A = _amp(coin_a, False, _A_LAB)
    D = _amp(coin_d, False, _A_LAB)
    B = _amp(coin_b, False, _BC_LAB)
    C = _amp(coin_c, False, _BC_LAB)
    return complex(_diamond_T(A, B, C, D, complex(z), 1.0))


def symmetric_diamond_T(t_a, r_a, t_b, r_b, z):
    """Diamond transmission when every ``t``/``r`` at a site is equal, ``A = D`` and ``B = C``."""
    s = t_a + r_a
    z2 = z * z
    return 2 * t_a * t_a * t_b * z2 * z / (1 - 2 * s * r_b * z2 - s * s * (t_b * t_b - r_b * r_b) * z2 * z2)


def symmetric_diamond_h(t_a, r_a, t_b, r_b, n: int):
    """``n``-th Taylor coefficient of :func:`symmetric_diamond_T` in closed form."""
    if n < 3 or n % 2 == 0:
        return 0 * t_a
    m = (n - 1) // 2
    s = t_a + r_a
    return t_a * t_a * s ** (m - 1) * ((t_b + r_b) ** m - (-1) ** m * (t_b - r_b) ** m)


def symmetric_diamond_hitting(t_a, r_a, t_b, r_b, n: int) -> float:
    """Crossing probability ``|h_n|^2`` for the symmetric diamond."""
    if n < 3 or n % 2 == 0:
        return 0.0
    m = (n - 1) // 2
    s = t_a + r_a
    return abs(t_a * t_a * s ** (m - 1)) ** 2 * abs((t_b + r_b) ** m - (-1) ** m * (t_b - r_b) ** m) ** 2


def grover_diamond_hitting(n: int):
    """Exact ``|h_n|^2`` for Grover coins: ``(8 / 9^{(n+1)/4})^2`` when ``n = 3 mod 4``."""
    from fractions import Fraction

    if n % 4 != 3:
        return Fraction(0)
    return Fraction(64, 81 ** ((n + 1) // 4))


# --- line walks -------------------------------------------------------------


def _line_amps(coin: CoinMatrix):
    m = coin.entries
    return {"r+": complex(m[0, 0]), "t+": complex(m[0, 1]), "t-": complex(m[1, 0]), "r-": complex(m[1, 1])}


def two_site_coefficients(coin0: CoinMatrix, coin1: CoinMatrix, gamma: float) -> dict[str, complex]:
    """Stationary coefficients ``r, t, a, b`` of two scatterers at sites 0 and 1."""
    import cmath

    c0, c1 = _line_amps(coin0), _line_amps(coin1)
    e2 = cmath.exp(2j * gamma)
    den = 1 - c1["r+"] * c0["r-"] * e2
    a = c0["t+"] * c1["r+"] * e2 / den
    b = c0["t+"] / den
    return {"r": c0["r+"] + c0["t-"] * a, "t": c1["t+"] * b, "a": a, "b": b}


def reference_sixsite_G(coins6: Sequence[CoinMatrix], x_i: float = -2.5, x_f: float = 0.5) -> Callable[[complex], complex]:
    """Closed-form Green function of six scatterers at ``j = -3..2``.

    ``x_i`` must lie between sites -3 and -2 and ``x_f`` between 0 and 1,
    with ``x_f - x_i`` and ``x_f + x_i`` integers so that every phase
    ``e^{ikx}`` pairs into an integer power of ``z``.

    Returns a function of ``z``.
    """
    if len(coins6) != 6:
        raise ValueError("need six coins, for sites -3..2")
    if not (-3 < x_i < -2 and 0 < x_f < 1):
        raise ValueError("x_i must lie in (-3, -2) and x_f in (0, 1)")
    d, s = x_f - x_i, x_f + x_i
    if d != int(d) or s != int(s):
        raise ValueError("x_f - x_i and x_f + x_i must be integers")
    d, s = int(d), int(s)
    c = {j: _line_amps(coins6[j + 3]) for j in range(-3, 3)}

    def G(z: complex) -> complex:
        z = complex(z)
        z2 = z * z
        R_l = c[-3]["r-"] * z ** 6
        R_r = c[1]["r+"] * z2 + c[1]["t-"] * c[1]["t+"] * c[2]["r+"] * z2 * z2 / (1 - c[1]["r-"] * c[2]["r+"] * z2)

        def block(p, m, left, right):
            # reflection/transmission of the block -2..0 seen from one side:
            # ``p``/``m`` are the incoming/opposite direction keys, ``left``
            # the near site and ``right`` the far one
            det_mid = c[-1]["r" + m] * c[-1]["r" + p] - c[-1]["t" + m] * c[-1]["t" + p]
            den = 1 - (c[left]["r" + m] * c[-1]["r" + p] + c[-1]["r" + m] * c[right]["r" + p]) * z2 + det_mid * c[
                left
            ]["r" + m] * c[right]["r" + p] * z2 * z2
            R = c[left]["r" + p] * z ** -4 + (
                (c[-1]["r" + p] - det_mid * c[right]["r" + p] * z2) * c[left]["t" + m] * c[left]["t" + p] * z ** -2
            ) / den
            T = c[left]["t" + p] * c[-1]["t" + p] * c[right]["t" + p] / den
            return R, T

        R_p, T_p = block("+", "-", -2, 0)
        R_m, T_m = block("-", "+", 0, -2)
        R_m = R_m * z ** 4
        pref = T_p / ((1 - R_l * R_p) * (1 - R_m * R_r) - T_p * T_m * R_l * R_r)
        # (e^{-ik x_i} + R_l e^{ik x_i})(e^{ik x_f} + R_r e^{-ik x_f})
        return pref * (z**d + R_l * z**s + R_r * z ** (-s) + R_l * R_r * z ** (-d))

    return G


# --- path-family closed forms ---------------------------------------------------


def superior_arm_family(n: int, order: int) -> dict[int, dict[tuple[int, ...], int]]:
    """Taylor expansion of the superior-arm, ``n``-fold ``t_B`` family.

    The closed form is

        t0A rA^{(n-1)/2} tB^n rD^{(n-1)/2} tD0 z^{2n+1}
        / ((1 - rA rB z^2)^{(n+1)/2} (1 - rB rD z^2)^{(n+1)/2})

    for odd ``n`` and zero for even ``n``.  The result maps each z-power up
    to ``order`` to ``{exponents: integer coefficient}`` with exponent
    vectors ordered as :data:`SUPERIOR_ARM_SYMBOLS`.
    """
    out: dict[int, dict[tuple[int, ...], int]] = {}
    if n % 2 == 0 or n < 1:
        return out
    h = (n - 1) // 2
    p = (n + 1) // 2
    base = 2 * n + 1
    # 1/(1-x)^p = sum_k C(k+p-1, k) x^k
    terms: dict[int, dict[tuple[int, ...], int]] = defaultdict(dict)
    for k1 in range((order - base) // 2 + 1 if order >= base else 0):
        for k2 in range((order - base) // 2 - k1 + 1):
            power = base + 2 * (k1 + k2)
            # (t0A, rA, tB, rB, rD, tD0)
            key = (1, h + k1, n, k1 + k2, h + k2, 1)
            terms[power][key] = terms[power].get(key, 0) + comb(k1 + p - 1, k1) * comb(k2 + p - 1, k2)
    out.update(terms)
    return out


SUPERIOR_ARM_SYMBOLS = ("t0A", "rA", "tB", "rB", "rD", "tD0")


def direct_crossing_monomials() -> set[tuple[str, ...]]:
    """The two direct three-step crossings, as sorted symbol-name tuples."""
    return {
        tuple(sorted(("t_{0+,A}", "t_{+-,B}", "t_{+0,D}"))),
        tuple(sorted(("t_{0-,A}", "t_{+-,C}", "t_{-0,D}"))),
    }


def five_step_crossings() -> set[tuple[str, ...]]:
    """The eight five-step crossings of the diamond, as sorted symbol-name tuples."""
    paths = [
        ("t_{0+,A}", "t_{+-,B}", "r_{++,D}", "r_{--,B}", "t_{+0,D}"),
        ("t_{0+,A}", "r_{++,B}", "r_{++,A}", "t_{+-,B}", "t_{+0,D}"),
        ("t_{0+,A}", "t_{+-,B}", "t_{+-,D}", "r_{--,C}", "t_{-0,D}"),
        ("t_{0+,A}", "r_{++,B}", "t_{+-,A}", "t_{+-,C}", "t_{-0,D}"),
        ("t_{0-,A}", "t_{+-,C}", "r_{--,D}", "r_{--,C}", "t_{-0,D}"),
        ("t_{0-,A}", "r_{++,C}", "r_{--,A}", "t_{+-,C}", "t_{-0,D}"),
        ("t_{0-,A}", "t_{+-,C}", "t_{-+,D}", "r_{--,B}", "t_{+0,D}"),
        ("t_{0-,A}", "r_{++,C}", "t_{-+,A}", "t_{+-,B}", "t_{+0,D}"),
    ]
    return {tuple(sorted(p)) for p in paths}
