"""Direct application of the one-step unitary to sparse walk states.

This is the brute-force reference every generating-function result is
checked against, so it deliberately shares nothing with the Green-function
solver beyond the topology and the coin matrices.

The global phase ``e^{i gamma}`` gained at every step is never multiplied
in; a state only counts its steps, and :meth:`WalkState.amplitude` applies
the phase on request.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .coins import CoinMatrix, site_matrices
from .errors import DegenerateRequestError, TopologyError
from .topology import BondState, GraphTopology


@dataclass(frozen=True)
class WalkState:
    """Sparse map of bond states to complex amplitudes.

    ``steps`` counts applications of U (the number of deferred
    ``e^{i gamma}`` factors); ``leaked`` is the probability absorbed so far
    by lead sinks, so ``norm2() + leaked`` is conserved.
    """

    amplitudes: Mapping[BondState, complex]
    steps: int = 0
    leaked: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", dict(sorted(self.amplitudes.items())))

    @classmethod
    def basis(cls, state: BondState) -> "WalkState":
        return cls({state: 1.0 + 0j})

    def norm2(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, state: BondState, gamma: float | None = None) -> complex:
        a = self.amplitudes.get(state, 0j)
        if gamma is not None:
            a *= cmath.exp(1j * gamma * self.steps)
        return a

    def support(self) -> tuple[BondState, ...]:
        return tuple(s for s, a in self.amplitudes.items() if a != 0)

    def __add__(self, other: "WalkState") -> "WalkState":
        if self.steps != other.steps:
            raise ValueError("cannot add states with different step counts")
        amps = dict(self.amplitudes)
        for s, a in other.amplitudes.items():
            amps[s] = amps.get(s, 0j) + a
        return WalkState(amps, self.steps)

    def __mul__(self, scalar: complex) -> "WalkState":
        return WalkState({s: scalar * a for s, a in self.amplitudes.items()}, self.steps)

    __rmul__ = __mul__


def _check_on_graph(state: WalkState, g: GraphTopology):
    for s in state.amplitudes:
        if not (0 <= s.site < g.num_sites and 1 <= s.direction <= g.valence[s.site]):
            raise TopologyError(f"state component {s} does not belong to the graph")


def _step(amplitudes, g: GraphTopology, mats) -> tuple[dict, float]:
    new: dict[BondState, complex] = {}
    lost = 0.0
    for s, a in amplitudes.items():
        gamma_j = mats[s.site]
        if gamma_j is None:
            lost += abs(a) ** 2
            continue
        row = gamma_j[s.direction - 1]
        for l, w in enumerate(row, start=1):
            if w == 0:
                continue
            target = g.partner(BondState(s.site, l))
            new[target] = new.get(target, 0j) + w * a
    return dict(sorted(new.items())), lost


def apply_step(state: WalkState, g: GraphTopology, coins: Mapping[int, CoinMatrix]) -> WalkState:
    """One application of U (the phase ``e^{i gamma}`` stays deferred)."""
    _check_on_graph(state, g)
    new, lost = _step(state.amplitudes, g, site_matrices(g, coins))
    return WalkState(new, state.steps + 1, state.leaked + lost)


def evolve(state: WalkState, n: int, g: GraphTopology, coins: Mapping[int, CoinMatrix]) -> WalkState:
    """``n`` applications of U; ``n = 0`` returns ``state`` unchanged."""
    if n < 0:
        raise ValueError("number of steps must be non-negative")
    _check_on_graph(state, g)
    mats = site_matrices(g, coins)
    amps, leaked = state.amplitudes, state.leaked
    for _ in range(n):
        amps, lost = _step(amps, g, mats)
        leaked += lost
    return WalkState(amps, state.steps + n, leaked)


def trajectory(state: WalkState, n: int, g: GraphTopology, coins: Mapping[int, CoinMatrix]) -> list[WalkState]:
    """States after 0, 1, ..., n steps."""
    out = [state]
    for _ in range(n):
        out.append(apply_step(out[-1], g, coins))
    return out


def probability(state: WalkState, target: BondState) -> float:
    """``|<target|state>|^2``; independent of the deferred global phase."""
    return abs(state.amplitudes.get(target, 0j)) ** 2


def first_arrival_amplitudes(
    g: GraphTopology,
    coins: Mapping[int, CoinMatrix],
    entry: BondState,
    exit: BondState,
    n_max: int,
) -> np.ndarray:
    """Amplitude deposited on an absorbing ``exit`` at each step ``0..n_max``.

    The walk starts in ``entry``; whatever lands on ``exit`` is recorded and
    removed before the next step.
    """
    if entry == exit:
        raise DegenerateRequestError("entry and exit coincide; the first arrival is trivially at n = 0")
    g.index(entry)
    g.index(exit)
    mats = site_matrices(g, coins)
    out = np.zeros(n_max + 1, dtype=complex)
    amps = {entry: 1.0 + 0j}
    for n in range(1, n_max + 1):
        amps, _ = _step(amps, g, mats)
        out[n] = amps.pop(exit, 0j)
        if not amps:
            break
    return out


def first_arrival_amplitude(g, coins, entry: BondState, exit: BondState, n: int) -> complex:
    """Coefficient of ``z^n`` in the entry-to-exit first-passage series."""
    return complex(first_arrival_amplitudes(g, coins, entry, exit, n)[n])
