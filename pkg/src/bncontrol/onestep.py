"""Minimal one-step controls: instantaneous (OI), temporary (OT), permanent (OP).

A candidate control is a set of nodes flipped in a source state ``s``:

* OI is valid when the flipped state already lies in the strong basin of
  the target in the unperturbed dynamics.
* OT is valid when the target's strong basin meets the controlled state
  space and the flipped state lies, under the held control, in the strong
  basin of that intersection.  Once there, releasing the control leaves the
  network committed to the target.
* OP is valid when the target survives the control (its states agree with
  the controlled values) and the flipped state lies in the target's strong
  basin under the held control.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .dynamics import Attractor, TransitionSystem, transition_system
from .model import BooleanNetwork, Control, apply_control, flips_for, force_control

__all__ = [
    "Mode",
    "ControlQuery",
    "ControlSolution",
    "is_valid_instantaneous",
    "is_valid_temporary",
    "is_valid_permanent",
    "is_valid",
    "minimal_controls",
    "minimal_oi",
    "minimal_ot",
    "minimal_op",
    "minimal_size",
]


class Mode(str, enum.Enum):
    OI = "OI"
    OT = "OT"
    OP = "OP"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        aliases = {"I": "OI", "T": "OT", "P": "OP", "ASI": "OI", "AST": "OT", "ASP": "OP"}
        key = str(value).upper()
        key = {"INSTANTANEOUS": "OI", "TEMPORARY": "OT", "PERMANENT": "OP"}.get(key, key)
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class ControlQuery:
    source: Attractor
    target: Attractor
    mode: Mode
    budget: int
    forbidden_nodes: frozenset = field(default_factory=frozenset)
    source_state: Optional[int] = None
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        object.__setattr__(self, "forbidden_nodes", frozenset(self.forbidden_nodes))
        if self.source.states == self.target.states:
            raise ValueError("source and target attractors must differ")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if self.source_state is not None and self.source_state not in self.source.states:
            raise ValueError("source_state is not a member of the source attractor")

    @property
    def state(self) -> int:
        return self.source.representative if self.source_state is None else self.source_state


@dataclass(frozen=True)
class ControlSolution:
    control: Control
    mode: Mode

    @property
    def size(self) -> int:
        return self.control.size

    @property
    def nodes(self) -> frozenset:
        return self.control.nodes


# ---------------------------------------------------------------------------
# Validity predicates


def _target_mask(ts: TransitionSystem, a: Attractor) -> np.ndarray:
    m = ts.empty()
    m[list(a.states)] = True
    return m


def _strong_basin(ts: TransitionSystem, a: Attractor) -> np.ndarray:
    key = ("strong", a.states)
    if key not in ts._cache:
        ts._cache[key] = ts.strong_basin_mask(_target_mask(ts, a))
    return ts._cache[key]


def _check(ts: TransitionSystem, mode: Mode, c: Control, x: int, target: Attractor) -> bool:
    """Validity of ``c`` once it has been applied, giving state ``x``."""
    sb = _strong_basin(ts, target)
    if mode is Mode.OI:
        return bool(sb[x])
    held = ts.under(c)
    if mode is Mode.OT:
        goal = sb & held.domain
        if not goal.any():
            return False
    else:
        if not all(held.domain[s] for s in target.states):
            return False
        goal = _target_mask(ts, target)
    return held.commits_to(x, goal)


def is_valid(g, mode, c: Control, s: int, target: Attractor) -> bool:
    """Whether flipping ``c`` in state ``s`` is a valid ``mode`` control towards ``target``."""
    ts = transition_system(g)
    return _check(ts, Mode.parse(mode), c, apply_control(c, s), target)


def is_valid_instantaneous(g, c: Control, s: int, target: Attractor) -> bool:
    return is_valid(g, Mode.OI, c, s, target)


def is_valid_temporary(g, c: Control, s: int, target: Attractor) -> bool:
    return is_valid(g, Mode.OT, c, s, target)


def is_valid_permanent(g, c: Control, s: int, target: Attractor) -> bool:
    return is_valid(g, Mode.OP, c, s, target)


# ---------------------------------------------------------------------------
# Search


def _validates(ts, q: ControlQuery, nodes: tuple) -> Optional[Control]:
    c = flips_for(q.state, nodes)
    if not _check(ts, q.mode, c, apply_control(c, q.state), q.target):
        return None
    if q.strict:
        # the same node values must work from every member of the source
        for s in q.source.states:
            if s != q.state and not _check(ts, q.mode, c, force_control(c, s), q.target):
                return None
    return c


def minimal_controls(g: BooleanNetwork, q: ControlQuery) -> list[ControlSolution]:
    """All subset-minimal controls of at most ``q.budget`` nodes.

    Node sets are tried by increasing size; supersets of a set that already
    works are skipped, so every returned control is minimal with respect to
    inclusion.  Results are sorted by size, then by node indices.
    """
    ts = transition_system(g)
    allowed = [i for i in range(ts.n) if i not in q.forbidden_nodes]
    found: list[Control] = []
    hit_masks: list[int] = []
    for size in range(1, min(q.budget, len(allowed)) + 1):
        for nodes in itertools.combinations(allowed, size):
            m = sum(1 << i for i in nodes)
            if any(h & m == h for h in hit_masks):
                continue
            c = _validates(ts, q, nodes)
            if c is not None:
                found.append(c)
                hit_masks.append(m)
    found.sort(key=Control.sort_key)
    return [ControlSolution(c, q.mode) for c in found]


def minimal_size(g: BooleanNetwork, source: Attractor, target: Attractor, mode,
                 forbidden: Iterable[int] = (), limit: Optional[int] = None) -> Optional[int]:
    """Size of the smallest valid control, or None if none exists within ``limit`` nodes."""
    ts = transition_system(g)
    limit = ts.n if limit is None else limit
    q = ControlQuery(source, target, mode, limit, frozenset(forbidden))
    allowed = [i for i in range(ts.n) if i not in q.forbidden_nodes]
    for size in range(1, min(limit, len(allowed)) + 1):
        for nodes in itertools.combinations(allowed, size):
            if _validates(ts, q, nodes) is not None:
                return size
    return None


def _minimal(mode: Mode):
    def search(g: BooleanNetwork, source: Attractor, target: Attractor, budget: int,
               forbidden: Iterable[int] = ()) -> list[ControlSolution]:
        return minimal_controls(g, ControlQuery(source, target, mode, budget, frozenset(forbidden)))
    search.__name__ = search.__qualname__ = f"minimal_{mode.value.lower()}"
    search.__doc__ = f"Minimal {mode.value} controls from ``source`` to ``target``."
    return search


minimal_oi = _minimal(Mode.OI)
minimal_ot = _minimal(Mode.OT)
minimal_op = _minimal(Mode.OP)
