"""Attractor-based sequential control (ASI, AST, ASP).

Paths are built backwards from the target.  Phase one records every
attractor that reaches the target with a single minimal control; phase two
repeatedly prepends a step in front of the paths found in the previous
round.  A path leaving the source may use the full budget ``k``; a path
stored for any other attractor may use at most ``k - 1`` perturbations,
because the source still needs at least one perturbation to get there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .dynamics import Attractor, attractors, transition_system
from .model import BooleanNetwork, Control
from .onestep import ControlQuery, Mode, minimal_controls, minimal_size

__all__ = [
    "SeqMode",
    "ControlPath",
    "SequentialQuery",
    "default_budget",
    "sequential_paths",
    "comp_seq_temp",
    "comp_seq_perm",
    "comp_seq_inst",
    "perm_control_validation",
    "shortest",
]


class SeqMode(str, enum.Enum):
    ASI = "ASI"
    AST = "AST"
    ASP = "ASP"

    @property
    def step_mode(self) -> Mode:
        return {"ASI": Mode.OI, "AST": Mode.OT, "ASP": Mode.OP}[self.value]

    @classmethod
    def parse(cls, value) -> "SeqMode":
        if isinstance(value, SeqMode):
            return value
        key = str(value).upper()
        return cls({"OI": "ASI", "OT": "AST", "OP": "ASP"}.get(key, key))


@dataclass(frozen=True)
class ControlPath:
    """``source -> intermediates[0] -> ... -> intermediates[-1]`` (the target).

    ``controls[i]`` drives the network into ``intermediates[i]``.
    """

    source: int
    intermediates: tuple
    controls: tuple
    mode: SeqMode

    def __post_init__(self):
        if len(self.intermediates) != len(self.controls) or not self.intermediates:
            raise ValueError("a path needs one control per step and at least one step")

    @property
    def total(self) -> int:
        return sum(c.size for c in self.controls)

    @property
    def target(self) -> int:
        return self.intermediates[-1]

    def __len__(self) -> int:
        return len(self.intermediates)

    @property
    def attractors(self) -> tuple:
        return (self.source,) + tuple(self.intermediates)

    def key(self):
        return (self.source, self.intermediates, tuple(c.sort_key() for c in self.controls))

    def sort_key(self):
        return (self.total, len(self), self.intermediates,
                tuple(c.sort_key() for c in self.controls))

    def prepend(self, source: int, control: Control) -> "ControlPath":
        return ControlPath(source, (self.source,) + self.intermediates,
                           (control,) + self.controls, self.mode)


@dataclass(frozen=True)
class SequentialQuery:
    source: Attractor
    target: Attractor
    mode: SeqMode
    budget: Optional[int] = None
    forbidden_nodes: frozenset = field(default_factory=frozenset)
    allowed_intermediates: Optional[frozenset] = None
    min_steps: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", SeqMode.parse(self.mode))
        object.__setattr__(self, "forbidden_nodes", frozenset(self.forbidden_nodes))
        if self.allowed_intermediates is not None:
            object.__setattr__(self, "allowed_intermediates", frozenset(self.allowed_intermediates))
        if self.source.states == self.target.states:
            raise ValueError("source and target attractors must differ")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.min_steps < 1:
            raise ValueError("min_steps must be at least 1")


def default_budget(g: BooleanNetwork, source: Attractor, target: Attractor, mode,
                   forbidden: Iterable[int] = ()) -> int:
    """Smallest one-step control size of the matching mode, or ``n`` if none exists."""
    mode = SeqMode.parse(mode)
    size = minimal_size(g, source, target, mode.step_mode, forbidden)
    return transition_system(g).n if size is None else size


def _projection(a: Attractor, nodes: int) -> frozenset:
    return frozenset(s & nodes for s in a.states)


def perm_control_validation(c: Control, reached: Attractor, intermediates, controls) -> bool:
    """Whether a permanent control can be kept while the rest of a path is applied.

    ``c`` drives the network into ``reached``; ``intermediates``/``controls``
    describe the path that continues from there (attractors and the
    controls leading into them).  Whatever part of ``c`` is not overridden
    by the next control must leave the next attractor untouched, i.e. the
    two attractors must agree on those nodes.  The check recurses along the
    path with the shrinking residual control.
    """
    residual = c
    current = reached
    for nxt, step in zip(intermediates, controls):
        residual = residual.minus(step.nodes)
        if _projection(current, residual.mask) != _projection(nxt, residual.mask):
            return False
        if not residual.nodes:
            break
        current = nxt
    return True


class _StepCache:
    def __init__(self, g, mode: Mode, k: int, forbidden: frozenset):
        self.g = g
        self.mode = mode
        self.k = k
        self.forbidden = forbidden
        self._memo: dict = {}

    def __call__(self, a: Attractor, b: Attractor) -> list:
        key = (a.id, b.id)
        if key not in self._memo:
            q = ControlQuery(a, b, self.mode, self.k, self.forbidden)
            self._memo[key] = [s.control for s in minimal_controls(self.g, q)]
        return self._memo[key]


def sequential_paths(g: BooleanNetwork, q: SequentialQuery) -> list[ControlPath]:
    """All sequential control paths from ``q.source`` to ``q.target`` within the budget.

    Direct one-step paths are included; ``q.min_steps`` drops paths with
    fewer control steps.  Results are sorted by ``ControlPath.sort_key``.
    """
    atts = {a.id: a for a in attractors(g)}
    src, tgt = atts[_resolve(atts, q.source)], atts[_resolve(atts, q.target)]
    k = q.budget if q.budget is not None else default_budget(
        g, src, tgt, q.mode, q.forbidden_nodes)
    step_mode = q.mode.step_mode
    permanent = q.mode is SeqMode.ASP
    steps = _StepCache(g, step_mode, k, q.forbidden_nodes)

    allowed = set(atts) - {tgt.id, src.id}
    if q.allowed_intermediates is not None:
        allowed &= set(q.allowed_intermediates)

    def limit(aid: int) -> int:
        return k if aid == src.id else k - 1

    ledger: dict[int, dict] = {aid: {} for aid in atts}
    frontier: dict[int, list[ControlPath]] = {}

    # phase 1: single-step paths into the target
    for aid in sorted(atts):
        if aid != src.id and aid not in allowed:
            continue
        for c in steps(atts[aid], tgt):
            if c.size > limit(aid):
                continue
            path = ControlPath(aid, (tgt.id,), (c,), q.mode)
            ledger[aid][path.key()] = path
            if aid != src.id:
                frontier.setdefault(aid, []).append(path)

    # phase 2: prepend steps to the paths found in the previous round
    while frontier:
        fresh: dict[int, list[ControlPath]] = {}
        for mid in sorted(frontier):
            for aid in sorted(allowed | {src.id}):
                if aid == mid:
                    continue
                controls = steps(atts[aid], atts[mid])
                if not controls:
                    continue
                for path in frontier[mid]:
                    if aid in path.intermediates:
                        continue
                    for c in controls:
                        if c.size + path.total > limit(aid):
                            continue
                        if permanent and not perm_control_validation(
                                c, atts[mid], [atts[i] for i in path.intermediates],
                                path.controls):
                            continue
                        longer = path.prepend(aid, c)
                        if longer.key() in ledger[aid]:
                            continue
                        ledger[aid][longer.key()] = longer
                        if aid != src.id:
                            fresh.setdefault(aid, []).append(longer)
        frontier = fresh

    found = [p for p in ledger[src.id].values() if len(p) >= q.min_steps]
    return sorted(found, key=ControlPath.sort_key)


def _resolve(atts: dict, a: Attractor) -> int:
    for aid, other in atts.items():
        if other.states == a.states:
            return aid
    raise ValueError("attractor does not belong to this network")


def comp_seq_temp(g: BooleanNetwork, q: SequentialQuery) -> list[ControlPath]:
    return sequential_paths(g, _with_mode(q, SeqMode.AST))


def comp_seq_perm(g: BooleanNetwork, q: SequentialQuery) -> list[ControlPath]:
    return sequential_paths(g, _with_mode(q, SeqMode.ASP))


def comp_seq_inst(g: BooleanNetwork, q: SequentialQuery) -> list[ControlPath]:
    return sequential_paths(g, _with_mode(q, SeqMode.ASI))


def _with_mode(q: SequentialQuery, mode: SeqMode) -> SequentialQuery:
    if q.mode is mode:
        return q
    return SequentialQuery(q.source, q.target, mode, q.budget, q.forbidden_nodes,
                           q.allowed_intermediates, q.min_steps)


def shortest(paths: Iterable[ControlPath]) -> list[ControlPath]:
    """The paths with the fewest perturbations in total."""
    paths = list(paths)
    if not paths:
        return []
    best = min(p.total for p in paths)
    return [p for p in paths if p.total == best]
