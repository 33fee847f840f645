"""Asynchronous dynamics: successors, reachability, attractors and basins.

The whole state space is held explicitly.  For every state the transition
system stores one integer whose set bits are the nodes that can change
value in that state; a transition flips exactly one such bit.  Self-loops
carry no information for reachability and are not stored (they are still
reported by :func:`successors`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .model import (
    MAX_NODES,
    BooleanNetwork,
    Control,
    ControlledNetwork,
    evaluate_all,
    state_from_string,
    state_to_string,
)

__all__ = [
    "StateSpaceTooLarge",
    "StateSet",
    "Attractor",
    "BasinReport",
    "TransitionSystem",
    "transition_system",
    "successors",
    "reach",
    "attractors",
    "weak_basin",
    "strong_basin",
    "strong_basin_restricted",
    "basins",
]

Network = Union[BooleanNetwork, ControlledNetwork]


class StateSpaceTooLarge(ValueError):
    pass


class StateSet:
    """A set of states over a fixed number of nodes, backed by a dense bool mask."""

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: Optional[np.ndarray] = None):
        self.n = n
        if mask is None:
            mask = np.zeros(1 << n, dtype=bool)
        self.mask = np.asarray(mask, dtype=bool)
        if self.mask.shape != (1 << n,):
            raise ValueError("mask does not match the number of nodes")

    @classmethod
    def from_states(cls, n: int, states: Iterable[Union[int, str]]) -> "StateSet":
        out = cls(n)
        for s in states:
            out.mask[_code(s)] = True
        return out

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, StateSet):
            if other.n != self.n:
                raise ValueError("state sets over different networks")
            return other.mask
        return StateSet.from_states(self.n, other).mask

    def __contains__(self, s) -> bool:
        return bool(self.mask[_code(s)])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __iter__(self) -> Iterator[int]:
        return iter(int(s) for s in np.flatnonzero(self.mask))

    def __eq__(self, other) -> bool:
        if isinstance(other, StateSet):
            return self.n == other.n and bool(np.array_equal(self.mask, other.mask))
        if isinstance(other, (set, frozenset)):
            return set(self) == {_code(s) for s in other}
        return NotImplemented

    __hash__ = None

    def __and__(self, other) -> "StateSet":
        return StateSet(self.n, self.mask & self._coerce(other))

    def __or__(self, other) -> "StateSet":
        return StateSet(self.n, self.mask | self._coerce(other))

    def __sub__(self, other) -> "StateSet":
        return StateSet(self.n, self.mask & ~self._coerce(other))

    def __le__(self, other) -> bool:
        return not bool((self.mask & ~self._coerce(other)).any())

    def isdisjoint(self, other) -> bool:
        return not bool((self.mask & self._coerce(other)).any())

    def to_strings(self) -> list[str]:
        """Members as bit strings, sorted."""
        return sorted(state_to_string(s, self.n) for s in self)

    def __repr__(self) -> str:
        shown = self.to_strings()
        if len(shown) > 8:
            shown = shown[:8] + ["..."]
        return f"StateSet({{{', '.join(shown)}}})"


def _code(s) -> int:
    if isinstance(s, str):
        return state_from_string(s)
    return int(s)


@dataclass(frozen=True)
class Attractor:
    """A bottom strongly connected component of the transition system.

    ``states`` is sorted ascending by state code; ``id`` is 1-based.
    """

    id: int
    states: tuple
    name: Optional[str] = None

    @property
    def representative(self) -> int:
        """Member with the smallest code; controls are applied here by default."""
        return self.states[0]

    def __contains__(self, s) -> bool:
        return _code(s) in self.states

    def __len__(self) -> int:
        return len(self.states)

    def label(self) -> str:
        return self.name or f"A{self.id}"


@dataclass(frozen=True)
class BasinReport:
    attractor: int
    weak: StateSet
    strong: StateSet


# ---------------------------------------------------------------------------


class TransitionSystem:
    """Explicit asynchronous transition system of a (possibly controlled) network."""

    def __init__(self, network: Network, diff: np.ndarray, control: Control = Control()):
        self.network = network
        self.base = network.base if isinstance(network, ControlledNetwork) else network
        self.control = control
        self.n = self.base.n
        self.size = 1 << self.n
        self.cmask = control.mask
        self.cone = control.one_mask
        # bit i of diff[s]: node i changes value in s (never set for controlled nodes)
        self.diff = diff
        if control.nodes:
            codes = np.arange(self.size, dtype=np.int64)
            self.domain = (codes & self.cmask) == self.cone
        else:
            self.domain = np.ones(self.size, dtype=bool)
        self._cache: dict = {}

    @classmethod
    def build(cls, g: Network, max_nodes: int = MAX_NODES) -> "TransitionSystem":
        base, control = (g.base, g.control) if isinstance(g, ControlledNetwork) else (g, Control())
        n = base.n
        if n > max_nodes:
            raise StateSpaceTooLarge(
                f"network has {n} nodes; explicit analysis is limited to {max_nodes}"
            )
        codes = np.arange(1 << n, dtype=np.int64)
        diff = np.zeros(1 << n, dtype=np.uint32)
        for i in range(n):
            if i in control.nodes:
                continue
            image = evaluate_all(base.functions[i], codes)
            current = ((codes >> i) & 1).astype(bool)
            diff |= (image != current).astype(np.uint32) << np.uint32(i)
        return cls(g, diff, control)

    def under(self, c: Control) -> "TransitionSystem":
        """The system of the same network held under ``c``."""
        if self.control.nodes:
            raise ValueError("controls are applied to the uncontrolled system")
        if not c.nodes:
            return self
        if any(i >= self.n for i in c.nodes):
            raise ValueError("control refers to a node outside the network")
        return TransitionSystem(
            ControlledNetwork(self.base, c), self.diff & np.uint32(~c.mask & 0xFFFFFFFF), c
        )

    # -- basic graph operations ------------------------------------------

    def empty(self) -> np.ndarray:
        return np.zeros(self.size, dtype=bool)

    def _check_state(self, s: int):
        if not 0 <= s < self.size:
            raise ValueError(f"state {s} outside the state space")
        if not self.domain[s]:
            raise ValueError("state lies outside the controlled state space")

    def successors(self, s: int) -> list[int]:
        self._check_state(s)
        d = int(self.diff[s])
        out = [s ^ (1 << i) for i in range(self.n) if (d >> i) & 1]
        # the state is its own successor as soon as one node is stable
        if bin(d).count("1") < self.n:
            out.append(s)
        return sorted(out)

    def forward(self, seeds: np.ndarray, within: Optional[np.ndarray] = None) -> np.ndarray:
        """All states reachable from ``seeds`` (bool mask), seeds included."""
        return self._closure(seeds, within, backward=False)

    def backward(self, seeds: np.ndarray, within: Optional[np.ndarray] = None) -> np.ndarray:
        """All states that can reach ``seeds`` (bool mask), seeds included."""
        return self._closure(seeds, within, backward=True)

    def _closure(self, seeds, within, backward):
        seen = np.array(seeds, dtype=bool, copy=True)
        if within is not None:
            seen &= within
        frontier = np.flatnonzero(seen)
        while frontier.size:
            found = []
            for i in range(self.n):
                bit = 1 << i
                nxt = frontier ^ bit
                # backward: the predecessor must be able to move on node i;
                # forward: the frontier state must
                movable = (self.diff[nxt if backward else frontier] & bit) != 0
                nxt = nxt[movable]
                nxt = nxt[~seen[nxt]]
                if within is not None:
                    nxt = nxt[within[nxt]]
                found.append(nxt)
            frontier = np.unique(np.concatenate(found))
            seen[frontier] = True
        return seen

    # -- strongly connected structure ------------------------------------

    def _edges(self):
        src, dst = [], []
        for i in range(self.n):
            bit = 1 << i
            s = np.flatnonzero(self.domain & ((self.diff & bit) != 0))
            src.append(s)
            dst.append(s ^ bit)
        return np.concatenate(src), np.concatenate(dst)

    def attractor_states(self) -> list[np.ndarray]:
        """Bottom SCCs of the transition system, ordered by smallest member."""
        if "attractors" not in self._cache:
            src, dst = self._edges()
            graph = csr_matrix(
                (np.ones(src.size, dtype=np.int8), (src, dst)), shape=(self.size, self.size)
            )
            _, labels = connected_components(graph, directed=True, connection="strong")
            leaving = np.zeros(labels.max() + 1, dtype=bool)
            leaving[labels[src][labels[src] != labels[dst]]] = True
            bottom = ~leaving[labels] & self.domain
            groups: dict[int, list[int]] = {}
            for s in np.flatnonzero(bottom):
                groups.setdefault(int(labels[s]), []).append(int(s))
            self._cache["attractors"] = sorted(
                (np.array(v, dtype=np.int64) for v in groups.values()), key=lambda a: a[0]
            )
        return self._cache["attractors"]

    # -- basins -----------------------------------------------------------

    def weak_basin_mask(self, target: np.ndarray) -> np.ndarray:
        return self.backward(target, self.domain)

    def strong_basin_mask(self, target: np.ndarray) -> np.ndarray:
        """States all of whose runs stay able to reach ``target``.

        This is the largest successor-closed subset of the weak basin: the
        weak basin minus every state that can leave it.
        """
        weak = self.weak_basin_mask(target)
        escape = self.backward(self.domain & ~weak, self.domain)
        return weak & ~escape

    def commits_to(self, s: int, target: np.ndarray) -> bool:
        """Whether ``s`` lies in the strong basin of ``target``.

        Only the forward closure of ``s`` is explored, which is much cheaper
        than building the whole basin when a single state is queried.
        """
        region = self.forward(self._single(s))
        hit = region & target
        if not hit.any():
            return False
        back = self.backward(hit, region)
        return bool(np.array_equal(back, region))

    def _single(self, s: int) -> np.ndarray:
        m = self.empty()
        m[s] = True
        return m


@lru_cache(maxsize=16)
def _cached_ts(g: Network, max_nodes: int) -> TransitionSystem:
    if isinstance(g, ControlledNetwork):
        return _cached_ts(g.base, max_nodes).under(g.control)
    return TransitionSystem.build(g, max_nodes)


def transition_system(g: Network, max_nodes: int = MAX_NODES) -> TransitionSystem:
    """Shared (cached) transition system for ``g``."""
    if isinstance(g, TransitionSystem):
        return g
    return _cached_ts(g, max_nodes)


# ---------------------------------------------------------------------------
# Functional API


def successors(g: Network, s) -> StateSet:
    ts = transition_system(g)
    return StateSet.from_states(ts.n, ts.successors(_code(s)))


def reach(g: Network, s) -> StateSet:
    ts = transition_system(g)
    s = _code(s)
    ts._check_state(s)
    return StateSet(ts.n, ts.forward(ts._single(s)))


def attractors(g: Network, max_nodes: int = MAX_NODES) -> list[Attractor]:
    """All attractors, ids 1, 2, ... in order of their smallest member state."""
    ts = transition_system(g, max_nodes)
    return [
        Attractor(k, tuple(int(s) for s in states))
        for k, states in enumerate(ts.attractor_states(), start=1)
    ]


def _attractor_mask(ts: TransitionSystem, a: Attractor) -> np.ndarray:
    m = ts.empty()
    m[list(a.states)] = True
    return m


def weak_basin(g: Network, a: Attractor) -> StateSet:
    ts = transition_system(g)
    return StateSet(ts.n, ts.weak_basin_mask(_attractor_mask(ts, a)))


def strong_basin(g: Network, a: Attractor) -> StateSet:
    ts = transition_system(g)
    key = ("strong", a.states)
    if key not in ts._cache:
        ts._cache[key] = ts.strong_basin_mask(_attractor_mask(ts, a))
    return StateSet(ts.n, ts._cache[key])


def strong_basin_restricted(g: BooleanNetwork, c: Control, target) -> StateSet:
    """Strong basin of the state set ``target`` in the network held under ``c``.

    ``target`` must be a non-empty subset of the controlled state space.  The
    result holds the controlled states from which every run keeps the
    ability to reach ``target``, i.e. every attractor of the controlled
    dynamics they can reach meets ``target``.
    """
    base = g.base if isinstance(g, ControlledNetwork) else g
    ts = transition_system(base).under(c)
    t = StateSet(ts.n)._coerce(target) if not isinstance(target, StateSet) else target.mask
    if not t.any():
        raise ValueError("target set is empty")
    if (t & ~ts.domain).any():
        raise ValueError("target set leaves the controlled state space")
    return StateSet(ts.n, ts.strong_basin_mask(t))


def basins(g: Network) -> list[BasinReport]:
    return [
        BasinReport(a.id, weak_basin(g, a), strong_basin(g, a)) for a in attractors(g)
    ]
