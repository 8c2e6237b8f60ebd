"""Hilbert-lattice structure of a scattering quantum walk.

A walk lives on the directed bonds of a finite undirected simple graph.  The
basis state ``BondState(site=j, direction=s)`` is the state *incoming* to
site ``j`` along the bond that ``j`` labels ``s``; every undirected bond
therefore carries exactly two states, one incoming to each endpoint.
Direction labels are explicit data (``1..K_j``), never inferred from
neighbour order, and may carry display names such as ``"+1"`` or ``"0"``.

Sites flagged ``free`` model truncated semi-infinite leads.  A free site of
valence 2 transmits perfectly; a free site of valence 1 is a sink standing
in for the rest of the lead, so amplitude reaching it never comes back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import SpecParseError, TopologyError

SCHEMA_VERSION = 1


@dataclass(frozen=True, order=True)
class BondState:
    """Basis state ``|direction, site>``; ordering is lexicographic."""

    site: int
    direction: int

    def __str__(self):
        return f"|{self.direction},{self.site}>"


class GraphTopology:
    """Immutable graph of sites, valences and labelled directed bonds.

    Parameters
    ----------
    valence : sequence of int
        ``K_j`` for every site ``j = 0..num_sites-1``.
    bonds : iterable of (BondState, BondState)
        Each undirected bond as the pair of states incoming to its two
        endpoints.
    free : sequence of bool, optional
        Lead markers.  Free sites must have valence 1 (sink) or 2.
    names, labels : optional
        Display names for sites and for each site's direction labels.
    marks : mapping of str to BondState, optional
        Named states (``entry``, ``exit`` ...) used by the CLI.
    """

    def __init__(
        self,
        valence: Sequence[int],
        bonds: Iterable[tuple[BondState, BondState]],
        free: Sequence[bool] | None = None,
        names: Sequence[str] | None = None,
        labels: Sequence[Sequence[str]] | None = None,
        marks: Mapping[str, BondState] | None = None,
    ):
        valence = tuple(int(k) for k in valence)
        n = len(valence)
        if n < 1:
            raise TopologyError("a graph needs at least one site")
        for j, k in enumerate(valence):
            if k < 1:
                raise TopologyError(f"site {j} has valence {k}; isolated sites are not allowed")

        free = tuple(bool(f) for f in free) if free is not None else (False,) * n
        if len(free) != n:
            raise TopologyError("free flags do not match the number of sites")
        for j, (k, f) in enumerate(zip(valence, free)):
            if f and k > 2:
                raise TopologyError(f"free site {j} has valence {k}; lead sites need valence 1 or 2")

        names = tuple(str(s) for s in names) if names is not None else tuple(str(j) for j in range(n))
        if len(names) != n or len(set(names)) != n:
            raise TopologyError("site names must be unique, one per site")

        if labels is None:
            labels = tuple(tuple(str(d) for d in range(1, k + 1)) for k in valence)
        else:
            labels = tuple(tuple(str(x) for x in lab) for lab in labels)
        if len(labels) != n:
            raise TopologyError("direction labels do not match the number of sites")
        for j, (lab, k) in enumerate(zip(labels, valence)):
            if len(lab) != k or len(set(lab)) != k:
                raise TopologyError(f"site {j} needs {k} distinct direction labels, got {lab}")

        partner: dict[BondState, BondState] = {}
        pairs = set()
        canonical = []
        for a, b in bonds:
            for s in (a, b):
                if not (0 <= s.site < n) or not (1 <= s.direction <= valence[s.site]):
                    raise TopologyError(f"bond references invalid state {s}")
            if a.site == b.site:
                raise TopologyError(f"self-loop at site {a.site}")
            key = frozenset((a.site, b.site))
            if key in pairs:
                raise TopologyError(f"multiple bonds between sites {a.site} and {b.site}")
            pairs.add(key)
            for s, other in ((a, b), (b, a)):
                if s in partner:
                    raise TopologyError(
                        f"reciprocity violation: direction {s.direction} of site {s.site} "
                        f"is used by bonds to sites {partner[s].site} and {other.site}"
                    )
                partner[s] = other
            canonical.append((a, b) if a < b else (b, a))

        for j, k in enumerate(valence):
            for d in range(1, k + 1):
                if BondState(j, d) not in partner:
                    raise TopologyError(f"direction {d} of site {j} is not attached to any bond")

        self._valence = valence
        self._free = free
        self._names = names
        self._labels = labels
        self._partner = MappingProxyType(partner)
        self._bonds = tuple(sorted(canonical))
        self._states = tuple(sorted(partner))
        self._index = MappingProxyType({s: i for i, s in enumerate(self._states)})
        marks = dict(marks or {})
        for name, s in marks.items():
            if s not in partner:
                raise TopologyError(f"mark {name!r} refers to invalid state {s}")
        self._marks = MappingProxyType(dict(sorted(marks.items())))

    # --- basic data -----------------------------------------------------

    @property
    def num_sites(self) -> int:
        return len(self._valence)

    @property
    def valence(self) -> tuple[int, ...]:
        return self._valence

    @property
    def free(self) -> tuple[bool, ...]:
        return self._free

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def labels(self) -> tuple[tuple[str, ...], ...]:
        return self._labels

    @property
    def bonds(self) -> tuple[tuple[BondState, BondState], ...]:
        return self._bonds

    @property
    def num_bonds(self) -> int:
        return len(self._bonds)

    @property
    def marks(self) -> Mapping[str, BondState]:
        return self._marks

    def states(self) -> tuple[BondState, ...]:
        """All bond states in canonical (site, direction) order."""
        return self._states

    def index(self, state: BondState) -> int:
        """Position of ``state`` in the canonical ordering."""
        try:
            return self._index[state]
        except KeyError:
            raise TopologyError(f"{state} is not a state of this graph") from None

    def is_sink(self, site: int) -> bool:
        return self._free[site] and self._valence[site] == 1

    # --- neighbour bookkeeping -----------------------------------------

    def partner(self, state: BondState) -> BondState:
        """The opposite-orientation state on the same undirected bond."""
        try:
            return self._partner[state]
        except KeyError:
            raise TopologyError(f"{state} is not a state of this graph") from None

    def own_labels(self, site: int) -> tuple[int, ...]:
        """``B_j``: direction labels at ``site``, one per incident bond."""
        return tuple(range(1, self._valence[site] + 1))

    def neighbors(self, site: int) -> tuple[int, ...]:
        """``S_j``: neighbour sites, ordered like :meth:`own_labels`."""
        return tuple(self._partner[BondState(site, d)].site for d in self.own_labels(site))

    def incoming_labels(self, site: int) -> tuple[int, ...]:
        """``N_j``: the label each neighbour uses for the bond toward ``site``."""
        return tuple(self._partner[BondState(site, d)].direction for d in self.own_labels(site))

    # --- name resolution ------------------------------------------------

    def site_id(self, site) -> int:
        """Resolve a site given by name or integer id."""
        if isinstance(site, str):
            if site in self._names:
                return self._names.index(site)
            try:
                site = int(site)
            except ValueError:
                raise TopologyError(f"unknown site {site!r}") from None
        if not isinstance(site, int) or not (0 <= site < self.num_sites):
            raise TopologyError(f"unknown site {site!r}")
        return site

    def direction_id(self, site: int, direction) -> int:
        """Resolve a direction at ``site`` given by label name or integer."""
        labels = self._labels[site]
        if isinstance(direction, str):
            if direction in labels:
                return labels.index(direction) + 1
            try:
                direction = int(direction)
            except ValueError:
                raise TopologyError(f"site {site} has no direction {direction!r}") from None
        if not isinstance(direction, int) or not (1 <= direction <= self._valence[site]):
            raise TopologyError(f"site {site} has no direction {direction!r}")
        return direction

    def state(self, site, direction) -> BondState:
        """Bond state from site/direction names or ids."""
        j = self.site_id(site)
        return BondState(j, self.direction_id(j, direction))

    def mark(self, name: str) -> BondState:
        try:
            return self._marks[name]
        except KeyError:
            raise TopologyError(f"graph has no mark named {name!r}") from None

    def label(self, state: BondState) -> str:
        return self._labels[state.site][state.direction - 1]

    def describe(self, state: BondState) -> str:
        return f"|{self.label(state)},{self._names[state.site]}>"

    def with_marks(self, **marks: BondState) -> "GraphTopology":
        merged = dict(self._marks)
        merged.update(marks)
        return GraphTopology(self._valence, self._bonds, self._free, self._names, self._labels, merged)

    # --- equality -------------------------------------------------------

    def _key(self):
        return (self._valence, self._bonds, self._free, self._names, self._labels, tuple(self._marks.items()))

    def __eq__(self, other):
        if not isinstance(other, GraphTopology):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GraphTopology(num_sites={self.num_sites}, num_bonds={self.num_bonds})"


def partner(state: BondState, g: GraphTopology) -> BondState:
    return g.partner(state)


# --- builders -------------------------------------------------------------

_LINE_RIGHTWARD, _LINE_LEFTWARD = "+1", "-1"


def _line_labels(n: int) -> list[tuple[str, ...]]:
    labels = []
    for j in range(n):
        if j == 0:
            labels.append((_LINE_LEFTWARD,))
        elif j == n - 1:
            labels.append((_LINE_RIGHTWARD,))
        else:
            labels.append((_LINE_RIGHTWARD, _LINE_LEFTWARD))
    return labels


def build_line(num_sites: int, free: Iterable[int] = (), names: Sequence[str] | None = None) -> GraphTopology:
    """Path graph ``0 - 1 - ... - (num_sites-1)``.

    Interior sites use direction 1 (label ``"+1"``) for the state arriving
    from the left neighbour and direction 2 (``"-1"``) for the state arriving
    from the right.  The two endpoints have valence 1 and a single direction
    labelled after the way its state moves.
    """
    if not isinstance(num_sites, int) or num_sites < 2:
        raise TopologyError(f"a line needs at least 2 sites, got {num_sites!r}")
    labels = _line_labels(num_sites)
    valence = [len(lab) for lab in labels]

    def st(j, lab):
        return BondState(j, labels[j].index(lab) + 1)

    bonds = [(st(j + 1, _LINE_RIGHTWARD), st(j, _LINE_LEFTWARD)) for j in range(num_sites - 1)]
    free_set = set(free)
    flags = [j in free_set for j in range(num_sites)]
    return GraphTopology(valence, bonds, flags, names=names, labels=labels)


def build_diamond_with_leads(left_lead: int = 1, right_lead: int = 1) -> GraphTopology:
    """Diamond ``A-{B,C}-D`` between two truncated free leads.

    Sites ``A, B, C, D`` take ids 0-3, the lead sites ``i`` (left of A) and
    ``f`` (right of D) ids 4 and 5, then ``left_lead`` extra sites ``l1..``
    and ``right_lead`` extra sites ``r1..``; the outermost of each is a sink.

    Direction labels: ``A`` and ``D`` use ``0`` (lead side), ``+`` (toward
    B) and ``-`` (toward C); ``B`` and ``C`` use ``+`` (toward A) and ``-``
    (toward D).  Lead sites follow the line convention, ``"+1"`` for the
    state moving rightward.  Marks: ``entry`` is the state on bond i-A
    entering A, ``exit`` the state on bond D-f entering f, ``refl`` the state
    on bond i-A entering i.
    """
    for name, length in (("left_lead", left_lead), ("right_lead", right_lead)):
        if not isinstance(length, int) or length < 1:
            raise TopologyError(f"{name} must be a positive integer, got {length!r}")

    names = ["A", "B", "C", "D", "i", "f"]
    labels: list[tuple[str, ...]] = [("0", "+", "-"), ("+", "-"), ("+", "-"), ("0", "+", "-")]
    labels += [(_LINE_RIGHTWARD, _LINE_LEFTWARD)] * 2
    left = [f"l{k}" for k in range(1, left_lead + 1)]
    right = [f"r{k}" for k in range(1, right_lead + 1)]
    for k, _ in enumerate(left, 1):
        labels.append((_LINE_LEFTWARD,) if k == left_lead else (_LINE_RIGHTWARD, _LINE_LEFTWARD))
    for k, _ in enumerate(right, 1):
        labels.append((_LINE_RIGHTWARD,) if k == right_lead else (_LINE_RIGHTWARD, _LINE_LEFTWARD))
    names += left + right
    ids = {name: j for j, name in enumerate(names)}

    def st(site, lab):
        j = ids[site]
        return BondState(j, labels[j].index(lab) + 1)

    bonds = [
        (st("A", "0"), st("i", "-1")),
        (st("A", "+"), st("B", "+")),
        (st("A", "-"), st("C", "+")),
        (st("D", "+"), st("B", "-")),
        (st("D", "-"), st("C", "-")),
        (st("f", "+1"), st("D", "0")),
    ]
    chain = ["i"] + left
    for inner, outer in zip(chain, chain[1:]):
        bonds.append((st(inner, "+1"), st(outer, "-1")))
    chain = ["f"] + right
    for inner, outer in zip(chain, chain[1:]):
        bonds.append((st(outer, "+1"), st(inner, "-1")))

    valence = [len(lab) for lab in labels]
    free = [name not in ("A", "B", "C", "D") for name in names]
    marks = {"entry": st("A", "0"), "exit": st("f", "+1"), "refl": st("i", "-1")}
    return GraphTopology(valence, bonds, free, names, labels, marks)


# --- graph-spec documents ---------------------------------------------------


def _state_to_doc(s: BondState) -> dict:
    return {"site": s.site, "dir": s.direction}


def topology_to_doc(g: GraphTopology) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "sites": [
            {"id": j, "valence": g.valence[j], "free": g.free[j], "name": g.names[j], "labels": list(g.labels[j])}
            for j in range(g.num_sites)
        ],
        "bonds": [{"a": _state_to_doc(a), "b": _state_to_doc(b)} for a, b in g.bonds],
        "marks": {name: _state_to_doc(s) for name, s in g.marks.items()},
    }


def to_spec(g: GraphTopology, coins_doc: list | None = None) -> str:
    """Serialise ``g`` (and optionally a ``coins`` block) as a JSON document."""
    doc = topology_to_doc(g)
    if coins_doc is not None:
        doc["coins"] = coins_doc
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SpecParseError("top level must be an object")
    return doc


def _require(obj, key, typ, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SpecParseError("missing required key", field=f"{where}.{key}")
    value = obj[key]
    if typ is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SpecParseError(f"expected an integer, got {value!r}", field=f"{where}.{key}")
    if typ is not int and not isinstance(value, typ):
        raise SpecParseError(f"expected {typ.__name__}, got {value!r}", field=f"{where}.{key}")
    return value


def topology_from_doc(doc: dict) -> GraphTopology:
    sites = _require(doc, "sites", list, "$")
    by_id = {}
    for n, site in enumerate(sites):
        where = f"sites[{n}]"
        sid = _require(site, "id", int, where)
        if sid in by_id:
            raise SpecParseError(f"duplicate site id {sid}", field=f"{where}.id")
        by_id[sid] = site
    if sorted(by_id) != list(range(len(by_id))):
        raise SpecParseError("site ids must be dense 0..num_sites-1", field="sites")

    valence, free, names, labels = [], [], [], []
    for sid in range(len(by_id)):
        site = by_id[sid]
        where = f"sites[id={sid}]"
        k = _require(site, "valence", int, where)
        valence.append(k)
        free.append(bool(site.get("free", False)))
        names.append(str(site.get("name", sid)))
        lab = site.get("labels")
        labels.append(tuple(str(x) for x in lab) if lab is not None else tuple(str(d) for d in range(1, k + 1)))

    def state(obj, where):
        sid = _require(obj, "site", int, where)
        d = _require(obj, "dir", int, where)
        if sid not in by_id:
            raise SpecParseError(f"bond references undeclared site {sid}", field=f"{where}.site")
        if not 1 <= d <= valence[sid]:
            raise SpecParseError(f"direction {d} outside 1..{valence[sid]} for site {sid}", field=f"{where}.dir")
        return BondState(sid, d)

    bonds = []
    for n, bond in enumerate(_require(doc, "bonds", list, "$")):
        where = f"bonds[{n}]"
        a = state(_require(bond, "a", dict, where), f"{where}.a")
        b = state(_require(bond, "b", dict, where), f"{where}.b")
        bonds.append((a, b))

    marks_doc = doc.get("marks", {})
    if not isinstance(marks_doc, dict):
        raise SpecParseError("marks must be an object", field="marks")
    marks = {name: state(m, f"marks.{name}") for name, m in marks_doc.items()}
    try:
        return GraphTopology(valence, bonds, free, names, labels, marks)
    except TopologyError as exc:
        raise SpecParseError(str(exc)) from None


def from_spec(text: str) -> GraphTopology:
    """Parse and validate the topology part of a graph-spec JSON document."""
    return topology_from_doc(parse_document(text))
