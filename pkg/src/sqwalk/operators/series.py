"""Path operator: symbolic path sums as truncated multivariate series.

Every coin entry of a non-free site becomes a formal symbol.  Evolving a
formal state multiplies the running monomial by one symbol per scattering
event, so after ``n`` steps the amplitude on the exit is a polynomial in
the symbols whose monomials are exactly the scattering paths of length
``n``.  Selecting path families is then exponent filtering; no derivative
of a closed form is ever taken.

Monomials are stored bit-packed in a single Python int: variable ``i``
owns bits ``[i*w, (i+1)*w)`` with ``w`` wide enough for the largest
possible exponent, so multiplying by a symbol is one integer addition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .. import exact as ex
from ..coins import CoinMatrix
from ..errors import DegenerateRequestError, DescriptorError, SeriesOverflowError
from ..topology import SCHEMA_VERSION, BondState, GraphTopology

MAX_ORDER = 24
MAX_TERMS = 2_000_000
PARTIAL, EXACT = "partial", "exact"
_LINE_LABELS = {"+1", "-1"}


@dataclass(frozen=True, order=True)
class CoinSymbol:
    """Formal coin entry ``kind_{in out, site}``; reflections have ``in == out``."""

    kind: str
    site: int
    in_label: int
    out_label: int

    def __post_init__(self):
        if self.kind not in ("r", "t"):
            raise ValueError(f"coin symbol kind must be 'r' or 't', got {self.kind!r}")
        if (self.kind == "r") != (self.in_label == self.out_label):
            raise ValueError("reflection symbols need in == out, transmissions in != out")

    @classmethod
    def of(cls, site: int, in_label: int, out_label: int) -> "CoinSymbol":
        return cls("r" if in_label == out_label else "t", site, in_label, out_label)

    def name(self, g: GraphTopology | None = None) -> str:
        """Readable name such as ``t_{0+,A}`` (or ``t_{+1,0}`` on a line)."""
        if g is None:
            return f"{self.kind}_{{{self.in_label}{self.out_label},{self.site}}}"
        a = g.labels[self.site][self.in_label - 1]
        b = g.labels[self.site][self.out_label - 1]
        site = g.names[self.site]
        if set(g.labels[self.site]) <= _LINE_LABELS:
            return f"{self.kind}_{{{a},{site}}}"
        return f"{self.kind}_{{{a}{b},{site}}}"


def coin_symbols(g: GraphTopology) -> list[CoinSymbol]:
    """Every coin entry of every non-free site, in canonical order."""
    out = []
    for j in range(g.num_sites):
        if g.free[j]:
            continue
        for i in g.own_labels(j):
            for l in g.own_labels(j):
                out.append(CoinSymbol.of(j, i, l))
    return out


def default_symbols(g: GraphTopology) -> dict[CoinSymbol, str]:
    """One distinct named variable per coin entry."""
    return {s: s.name(g) for s in coin_symbols(g)}


SymbolKey = Union[CoinSymbol, str]


@dataclass(frozen=True)
class PathDescriptor:
    """Exponent constraints selecting a family of paths.

    ``factors`` pairs a symbol (CoinSymbol or variable name) with the exact
    exponent it must carry.  In ``exact`` mode every other symbol must be
    absent unless listed in ``exempt``.  An exponent of zero is allowed and
    means the symbol must not occur.
    """

    factors: tuple[tuple[SymbolKey, int], ...]
    mode: str = PARTIAL
    exempt: tuple[SymbolKey, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((k, int(p)) for k, p in self.factors))
        object.__setattr__(self, "exempt", tuple(self.exempt))
        mode = self.mode.lower() if isinstance(self.mode, str) else self.mode
        if mode not in (PARTIAL, EXACT):
            raise DescriptorError(f"descriptor mode must be 'partial' or 'exact', got {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        keys = [k for k, _ in self.factors]
        if len(set(keys)) != len(keys):
            raise DescriptorError("descriptor repeats a coin symbol")
        for k, p in self.factors:
            if p < 0:
                raise DescriptorError(f"exponent of {k} must be non-negative, got {p}")


class MultivariateSeries:
    """Truncated series ``sum_n z^n P_n(symbols)`` with packed monomials.

    Parameters
    ----------
    variables : sequence of str
        Variable names; position ``i`` owns bit field ``i``.
    width : int
        Bits per exponent field.
    terms : mapping (n, packed monomial) -> coefficient
    n_max : int
        Truncation order; coefficients above it are unknown, not zero.
    symbol_map : mapping CoinSymbol -> variable name, optional
    """

    def __init__(self, variables: Sequence[str], width: int, terms: Mapping, n_max: int, symbol_map=None):
        self.variables = tuple(variables)
        self.width = int(width)
        self.n_max = int(n_max)
        self._index = {v: i for i, v in enumerate(self.variables)}
        self._terms = {k: c for k, c in sorted(terms.items()) if c}
        self.symbol_map = dict(symbol_map or {})

    # --- monomial helpers ----------------------------------------------

    def exponents(self, mono: int) -> tuple[int, ...]:
        mask = (1 << self.width) - 1
        return tuple((mono >> (self.width * i)) & mask for i in range(len(self.variables)))

    def pack(self, exps: Mapping[str, int]) -> int:
        mono = 0
        for name, p in exps.items():
            if p >= 1 << self.width:
                raise SeriesOverflowError(f"exponent {p} does not fit the series' {self.width}-bit fields")
            mono += p << (self.width * self.var_index(name))
        return mono

    def var_index(self, key: SymbolKey) -> int:
        if isinstance(key, CoinSymbol):
            if key not in self.symbol_map:
                raise DescriptorError(f"unknown coin symbol {key}")
            key = self.symbol_map[key]
        try:
            return self._index[key]
        except KeyError:
            raise DescriptorError(f"unknown symbol {key!r}") from None

    # --- views -----------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, int], object]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        """Yield ``(n, {name: power}, coefficient)`` in canonical order."""
        for (n, mono), c in self._terms.items():
            exps = self.exponents(mono)
            yield n, {self.variables[i]: p for i, p in enumerate(exps) if p}, c

    def orders(self) -> list[int]:
        return sorted({n for n, _ in self._terms})

    def monomials(self, n: int | None = None) -> set[tuple[str, ...]]:
        """Monomials (as sorted name tuples with repetition) at order ``n``, or all."""
        out = set()
        for k, exps, _ in self:
            if n is None or k == n:
                out.add(tuple(sorted(name for name, p in exps.items() for _ in range(p))))
        return out

    def coefficient(self, n: int, exps: Mapping[str, int]):
        return self._terms.get((n, self.pack(exps)), 0)

    def total_degree_matches_order(self) -> bool:
        """True when each term carries exactly one symbol per step."""
        return all(sum(e.values()) == n for n, e, _ in self)

    # --- algebra -----------------------------------------------------------

    def _like(self, terms) -> "MultivariateSeries":
        return MultivariateSeries(self.variables, self.width, terms, self.n_max, self.symbol_map)

    def _check_compatible(self, other: "MultivariateSeries"):
        if self.variables != other.variables or self.width != other.width:
            raise ValueError("series use different variable layouts")

    def __add__(self, other: "MultivariateSeries") -> "MultivariateSeries":
        self._check_compatible(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        out = self._like(terms)
        out.n_max = min(self.n_max, other.n_max)
        return out

    def __eq__(self, other):
        if not isinstance(other, MultivariateSeries):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, tuple(self._terms.items())))

    def select(self, keep) -> "MultivariateSeries":
        """Terms for which ``keep(n, exponent_tuple)`` is true."""
        return self._like({(n, m): c for (n, m), c in self._terms.items() if keep(n, self.exponents(m))})

    def evaluate(self, values: Mapping[str, object]) -> list:
        """Substitute numbers for every symbol; returns ``[P_0, ..., P_{n_max}]``.

        Values may be complex or exact; the output follows their type.
        """
        missing = [v for v in self.variables if v not in values]
        if missing:
            raise DescriptorError(f"no value for symbols {missing}")
        vals = [values[v] for v in self.variables]
        use_exact = any(ex.is_exact(v) for v in vals)
        zero = ex.ZERO if use_exact else 0j
        out = [zero] * (self.n_max + 1)
        for (n, mono), c in self._terms.items():
            term = ex.to_exact(c) if use_exact else complex(c)
            for i, p in enumerate(self.exponents(mono)):
                if p:
                    term = term * vals[i] ** p
            out[n] = out[n] + term
        return out

    # --- output --------------------------------------------------------------

    def format_term(self, n: int, exps: Mapping[str, int], coeff) -> str:
        parts = [name if p == 1 else f"{name}^{p}" for name, p in exps.items()]
        if coeff != 1:
            parts.insert(0, ex.format_exact(coeff) if ex.is_exact(coeff) else str(coeff))
        parts.append(f"z^{n}")
        return " ".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(self.format_term(n, e, c) for n, e, c in self)

    def __repr__(self):
        return f"MultivariateSeries({len(self)} terms, n_max={self.n_max})"

    def to_doc(self) -> dict:
        terms = []
        for n, e, c in self:
            re, im = ex.parts(c) if ex.is_exact(c) or isinstance(c, int) else (complex(c).real, complex(c).imag)
            terms.append({"n": n, "monomial": e, "coeff": [_num(re), _num(im)]})
        return {"schema_version": SCHEMA_VERSION, "n_max": self.n_max, "variables": list(self.variables), "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2) + "\n"


def _num(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


# --- construction ----------------------------------------------------------------


def symbolic_series(
    g: GraphTopology,
    entry: BondState,
    exit: BondState,
    n_max: int,
    symbols: Mapping[CoinSymbol, str] | None = None,
    absorbing: bool = True,
    max_order: int = MAX_ORDER,
    max_terms: int = MAX_TERMS,
    coins: Mapping[int, CoinMatrix] | None = None,
) -> MultivariateSeries:
    """Formal path sum from ``entry`` to ``exit`` up to ``z^{n_max}``.

    Parameters
    ----------
    g : GraphTopology
    entry, exit : BondState
    n_max : int
        Truncation order, at most ``max_order``.
    symbols : mapping CoinSymbol -> name, optional
        Variable assignment; giving several entries the same name merges
        them.  Defaults to :func:`default_symbols`.
    absorbing : bool
        Remove amplitude from ``exit`` once it arrives (first passage).
    coins : mapping site -> CoinMatrix, optional
        When given, coin entries that are exactly zero are left out, so
        paths through them do not appear.

    Raises
    ------
    SeriesOverflowError
        ``n_max`` above ``max_order`` or more than ``max_terms`` live terms.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > max_order:
        raise SeriesOverflowError(f"n_max = {n_max} exceeds the configured maximum order {max_order}")
    if entry == exit:
        raise DegenerateRequestError("entry and exit coincide")
    g.index(entry)
    g.index(exit)
    symbols = default_symbols(g) if symbols is None else dict(symbols)
    for s in coin_symbols(g):
        if s not in symbols:
            raise DescriptorError(f"coin entry {s} has no symbol assigned")
    variables = tuple(sorted(set(symbols.values())))
    index = {v: i for i, v in enumerate(variables)}
    width = max(1, n_max.bit_length())
    step_of = {s: 1 << (width * index[name]) for s, name in symbols.items()}

    # outgoing moves per state: (target, packed increment)
    moves: dict[BondState, list[tuple[BondState, int]]] = {}
    for s in g.states():
        j = s.site
        if g.free[j]:
            if g.valence[j] == 1:
                moves[s] = []
            else:
                moves[s] = [(g.partner(BondState(j, 3 - s.direction)), 0)]
            continue
        moves[s] = [
            (g.partner(BondState(j, l)), step_of[CoinSymbol.of(j, s.direction, l)])
            for l in g.own_labels(j)
            if coins is None or coins[j].entries[s.direction - 1, l - 1] != 0
        ]

    result: dict[tuple[int, int], int] = {}
    state: dict[BondState, dict[int, int]] = {entry: {0: 1}}
    for n in range(1, n_max + 1):
        new: dict[BondState, dict[int, int]] = {}
        for s, poly in state.items():
            for target, inc in moves[s]:
                bucket = new.setdefault(target, {})
                for mono, c in poly.items():
                    key = mono + inc
                    bucket[key] = bucket.get(key, 0) + c
        arrived = new.pop(exit, None) if absorbing else new.get(exit)
        if arrived:
            for mono, c in arrived.items():
                if c:
                    result[(n, mono)] = c
        count = sum(len(p) for p in new.values()) + len(result)
        if count > max_terms:
            raise SeriesOverflowError(f"symbolic series exceeds {max_terms} terms at order {n}")
        state = new
        if not state:
            break
    return MultivariateSeries(variables, width, result, n_max, symbols)


# --- filters ----------------------------------------------------------------------


def path_filter(series: MultivariateSeries, p: PathDescriptor) -> MultivariateSeries:
    """Keep the terms matching the descriptor's exponents."""
    fixed: dict[int, int] = {}
    for key, power in p.factors:
        i = series.var_index(key)
        if i in fixed:
            raise DescriptorError(f"descriptor constrains variable {series.variables[i]!r} twice")
        fixed[i] = power
    exempt = {series.var_index(k) for k in p.exempt}
    free_vars = set(fixed) | exempt
    exact_mode = p.mode == EXACT

    def keep(n, exps):
        for i, power in fixed.items():
            if exps[i] != power:
                return False
        if exact_mode:
            return all(e == 0 for i, e in enumerate(exps) if i not in free_vars)
        return True

    return series.select(keep)


def arm_split_filter(
    series: MultivariateSeries,
    n_plus: int,
    n_minus: int,
    upper: Iterable[SymbolKey],
    lower: Iterable[SymbolKey],
    exempt: Iterable[SymbolKey] = (),
) -> MultivariateSeries:
    """Keep paths whose upper-group exponents sum to ``n_plus - 1`` and lower to ``n_minus - 1``.

    Every symbol that occurs in the series must belong to ``upper``,
    ``lower`` or ``exempt``.
    """
    up = {series.var_index(k) for k in upper}
    lo = {series.var_index(k) for k in lower}
    exm = {series.var_index(k) for k in exempt}
    if up & lo:
        names = sorted(series.variables[i] for i in up & lo)
        raise DescriptorError(f"symbols {names} are in both arm groups")
    used = set()
    for _, exps, _ in series:
        used.update(exps)
    ungrouped = sorted(v for v in used if series.var_index(v) not in up | lo | exm)
    if ungrouped:
        raise DescriptorError(f"group assignment missing symbols {ungrouped}")

    def keep(n, exps):
        return sum(exps[i] for i in up) == n_plus - 1 and sum(exps[i] for i in lo) == n_minus - 1

    return series.select(keep)


def diamond_arm_groups(g: GraphTopology) -> tuple[set[CoinSymbol], set[CoinSymbol], set[CoinSymbol]]:
    """Upper-arm, lower-arm and exempt symbols of the diamond ``A-{B,C}-D``.

    The upper arm owns the steps into or inside ``A-B-D``: ``t_{-+,A}``,
    ``r_{++,A}``, every coin entry of ``B``, ``t_{-+,D}`` and ``r_{++,D}``;
    the lower arm mirrors it.  Entry and exit transmissions ``t_{0+-,A}``
    and ``t_{+-0,D}`` are exempt.
    """

    def sym(site, a, b):
        j = g.site_id(site)
        return CoinSymbol.of(j, g.direction_id(j, a), g.direction_id(j, b))

    def whole(site):
        j = g.site_id(site)
        return {CoinSymbol.of(j, a, b) for a in g.own_labels(j) for b in g.own_labels(j)}

    upper = {sym("A", "-", "+"), sym("A", "+", "+"), sym("D", "-", "+"), sym("D", "+", "+")} | whole("B")
    lower = {sym("A", "+", "-"), sym("A", "-", "-"), sym("D", "+", "-"), sym("D", "-", "-")} | whole("C")
    exempt = {sym("A", "0", "+"), sym("A", "0", "-"), sym("D", "+", "0"), sym("D", "-", "0")}
    return upper, lower, exempt


def numeric_values(
    series_symbols: Mapping[CoinSymbol, str],
    coins: Mapping[int, CoinMatrix],
    exact: bool = False,
) -> dict[str, object]:
    """Numeric value of every variable from the coins; merged symbols must agree."""
    values: dict[str, object] = {}
    for s, name in series_symbols.items():
        v = coins[s.site].amplitude(s.in_label, s.out_label, exact=exact)
        if name in values and values[name] != v:
            raise DescriptorError(f"merged symbol {name!r} has conflicting values {values[name]} and {v}")
        values[name] = v
    return values
