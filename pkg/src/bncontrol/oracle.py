"""Brute-force reference implementation used to cross-check the engine.

Everything here is computed straight from the definitions with plain
Python sets: successor lists per state, forward reachability per state,
attractors as the reach sets that every member can return from, and
basins by intersecting reach sets with attractors.  Nothing is imported
from the fixpoint engine, so a bug there cannot hide behind a shared helper.
Intended for networks of at most :data:`MAX_ORACLE_NODES` nodes.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .model import (
    And,
    BooleanNetwork,
    Control,
    Not,
    Or,
    Var,
    evaluate,
    flips_for,
    force_control,
)

MAX_ORACLE_NODES = 12

__all__ = [
    "MAX_ORACLE_NODES",
    "Oracle",
    "oracle_for",
    "Schedule",
    "Verdict",
    "brute_force_minimal_controls",
    "brute_force_paths",
    "verify_path",
    "simulate",
    "random_network",
]

_MODES = {
    "OI": "instantaneous", "ASI": "instantaneous", "instantaneous": "instantaneous",
    "OT": "temporary", "AST": "temporary", "temporary": "temporary",
    "OP": "permanent", "ASP": "permanent", "permanent": "permanent",
}


def _mode(mode) -> str:
    key = getattr(mode, "value", mode)
    try:
        return _MODES[key]
    except KeyError:
        raise ValueError(f"unknown control mode {mode!r}") from None


def _states_of(a) -> frozenset:
    return frozenset(getattr(a, "states", a))


class Oracle:
    """Definition-level view of one network's dynamics."""

    def __init__(self, g: BooleanNetwork):
        if g.n > MAX_ORACLE_NODES:
            raise ValueError(f"oracle is limited to {MAX_ORACLE_NODES} nodes, got {g.n}")
        self.g = g
        self.n = g.n
        # image[s]: bits of f_i(s) for every node i
        self.image = []
        for s in range(1 << g.n):
            bits = 0
            for i, f in enumerate(g.functions):
                if evaluate(f, s):
                    bits |= 1 << i
            self.image.append(bits)
        self._reach: dict = {}
        self._attractors: dict = {}

    # -- graphs ---------------------------------------------------------------

    def space(self, ctrl: Optional[Control] = None) -> list[int]:
        states = range(1 << self.n)
        if ctrl is None:
            return list(states)
        return [s for s in states if force_control(ctrl, s) == s]

    def next_states(self, s: int, ctrl: Optional[Control] = None) -> set[int]:
        """Value-changing successors of ``s`` (self-loops left out)."""
        frozen = ctrl.nodes if ctrl is not None else frozenset()
        out = set()
        for i in range(self.n):
            if i in frozen:
                continue
            if ((self.image[s] >> i) & 1) != ((s >> i) & 1):
                out.add(s ^ (1 << i))
        return out

    def reach(self, s: int, ctrl: Optional[Control] = None) -> frozenset:
        key = (s, _ctrl_key(ctrl))
        if key not in self._reach:
            seen = {s}
            todo = [s]
            while todo:
                u = todo.pop()
                for v in self.next_states(u, ctrl):
                    if v not in seen:
                        seen.add(v)
                        todo.append(v)
            self._reach[key] = frozenset(seen)
        return self._reach[key]

    def recurrent(self, s: int, ctrl: Optional[Control] = None) -> bool:
        """``s`` can come back from anywhere it can go, i.e. it sits in an attractor."""
        return all(s in self.reach(t, ctrl) for t in self.reach(s, ctrl))

    def attractors(self, ctrl: Optional[Control] = None) -> list[tuple]:
        key = _ctrl_key(ctrl)
        if key not in self._attractors:
            found = {self.reach(s, ctrl) for s in self.space(ctrl) if self.recurrent(s, ctrl)}
            self._attractors[key] = sorted((tuple(sorted(a)) for a in found), key=lambda a: a[0])
        return self._attractors[key]

    def weak_basin(self, a) -> frozenset:
        a = _states_of(a)
        return frozenset(s for s in self.space() if self.reach(s) & a)

    def strong_basin(self, a) -> frozenset:
        a = _states_of(a)
        others = [frozenset(b) for b in self.attractors() if frozenset(b) != a]
        return frozenset(
            s for s in self.space()
            if self.reach(s) & a and not any(self.reach(s) & b for b in others)
        )

    # -- control checks -------------------------------------------------------

    def commits(self, x: int, ctrl: Control, goal: frozenset) -> bool:
        """Under the held control, every attractor reachable from ``x`` meets ``goal``."""
        region = self.reach(x, ctrl)
        if not region & goal:
            return False
        for t in region:
            if self.recurrent(t, ctrl) and not self.reach(t, ctrl) & goal:
                return False
        return True

    def valid(self, mode, ctrl: Control, x: int, target) -> bool:
        """Whether state ``x`` (the source after applying ``ctrl``) satisfies ``mode``."""
        mode = _mode(mode)
        target = _states_of(target)
        sb = self._sb(target)
        if mode == "instantaneous":
            return x in sb
        if mode == "temporary":
            goal = frozenset(s for s in sb if force_control(ctrl, s) == s)
            return bool(goal) and self.commits(x, ctrl, goal)
        if any(force_control(ctrl, s) != s for s in target):
            return False
        return self.commits(x, ctrl, target) and all(
            t in target for t in self.reach(x, ctrl) if self.recurrent(t, ctrl))

    def _sb(self, target: frozenset) -> frozenset:
        key = ("sb", target)
        if key not in self._reach:
            self._reach[key] = self.strong_basin(target)
        return self._reach[key]


@functools.lru_cache(maxsize=8)
def oracle_for(g: BooleanNetwork) -> Oracle:
    """Shared oracle for ``g``; its reach sets are memoised across calls."""
    return Oracle(g)


def _ctrl_key(ctrl: Optional[Control]):
    if ctrl is None or not ctrl.nodes:
        return None
    return (ctrl.zero, ctrl.one)


def _designated(a) -> int:
    return min(_states_of(a))


def brute_force_minimal_controls(g, source, target, mode, budget: Optional[int] = None,
                                 forbidden: Iterable[int] = (), strict: bool = False,
                                 oracle: Optional[Oracle] = None) -> list[frozenset]:
    """Inclusion-minimal node sets whose flip drives ``source`` into ``target``.

    Every subset of nodes (up to ``budget``) is checked, the valid ones are
    collected, and only those without a valid proper subset are returned.
    """
    o = oracle or oracle_for(g)
    src, tgt = _states_of(source), _states_of(target)
    if src == tgt:
        return [frozenset()]
    s = _designated(src)
    forbidden = set(forbidden)
    nodes = [i for i in range(o.n) if i not in forbidden]
    top = len(nodes) if budget is None else min(budget, len(nodes))
    valid = []
    for size in range(top + 1):
        for combo in itertools.combinations(nodes, size):
            ctrl = flips_for(s, combo)
            if not o.valid(mode, ctrl, s ^ ctrl.mask, tgt):
                continue
            if strict and not all(o.valid(mode, ctrl, force_control(ctrl, t), tgt) for t in src):
                continue
            valid.append(frozenset(combo))
    minimal = [v for v in valid if not any(u < v for u in valid)]
    return sorted(minimal, key=lambda v: (len(v), sorted(v)))


def _residual_chain_ok(ctrl: Control, reached, later: Sequence, later_controls: Sequence) -> bool:
    # literal form: the residual of ``ctrl`` is compared against the attractor
    # it reached, step after step
    reached = _states_of(reached)
    keep = set(ctrl.nodes)
    for nxt, step in zip(later, later_controls):
        keep -= step.nodes
        mask = sum(1 << i for i in keep)
        if {s & mask for s in reached} != {s & mask for s in _states_of(nxt)}:
            return False
    return True


def brute_force_paths(g, source, target, mode, budget: int, forbidden: Iterable[int] = (),
                      allowed_intermediates: Optional[Iterable] = None,
                      oracle: Optional[Oracle] = None) -> set:
    """Every attractor sequence with minimal step controls, as comparable tuples.

    Each element is ``(attractor ids, ((zero, one), ...))`` with attractor ids
    1-based in the oracle's own ordering and zero/one as sorted node tuples.
    """
    o = oracle or oracle_for(g)
    mode = _mode(mode)
    atts = o.attractors()
    ids = {frozenset(a): k for k, a in enumerate(atts, start=1)}
    src, tgt = ids[_states_of(source)], ids[_states_of(target)]
    pool = set(ids.values()) - {src, tgt}
    if allowed_intermediates is not None:
        pool &= {x if isinstance(x, int) else ids[_states_of(x)] for x in allowed_intermediates}
    memo: dict = {}

    def step(a: int, b: int) -> list[Control]:
        if (a, b) not in memo:
            sets = brute_force_minimal_controls(
                g, atts[a - 1], atts[b - 1], mode, budget, forbidden, oracle=o)
            s = min(atts[a - 1])
            memo[(a, b)] = [flips_for(s, nodes) for nodes in sets]
        return memo[(a, b)]

    found = set()

    def extend(route: list, controls: list, spent: int):
        here = route[-1]
        for nxt in sorted(pool - set(route)) + [tgt]:
            for c in step(here, nxt):
                if spent + c.size > budget:
                    continue
                r, cs = route + [nxt], controls + [c]
                if nxt == tgt:
                    if mode == "permanent" and not all(
                            _residual_chain_ok(cs[i], atts[r[i + 1] - 1],
                                               [atts[x - 1] for x in r[i + 2:]], cs[i + 1:])
                            for i in range(len(cs) - 1)):
                        continue
                    found.add((tuple(r), tuple(
                        (tuple(sorted(x.zero)), tuple(sorted(x.one))) for x in cs)))
                else:
                    extend(r, cs, spent + c.size)

    extend([src], [], 0)
    return found


@dataclass(frozen=True)
class Schedule:
    """Controls applied one after another, and the attractors they should reach."""

    controls: tuple
    intermediates: tuple
    mode: str = "temporary"

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "intermediates", tuple(self.intermediates))
        object.__setattr__(self, "mode", _mode(self.mode))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failing_step: Optional[int] = None
    witness: Optional[int] = None
    reason: str = ""


def verify_path(g, source, target, schedule: Schedule, strict: bool = False,
                oracle: Optional[Oracle] = None) -> Verdict:
    """Replay a control schedule against the definitions.

    Intermediates may be given as 1-based attractor ids or as collections of
    states.  Controls are applied at the smallest state of each attractor on
    the way (at every state when ``strict``).
    """
    if len(schedule.controls) != len(schedule.intermediates):
        raise ValueError("schedule has a different number of controls and intermediates")
    o = oracle or oracle_for(g)
    atts = [frozenset(a) for a in o.attractors()]

    def resolve(x) -> frozenset:
        if isinstance(x, int):
            if not 1 <= x <= len(atts):
                raise ValueError(f"no attractor with id {x}")
            return atts[x - 1]
        states = _states_of(x)
        if states not in atts:
            raise ValueError("schedule names a set of states that is not an attractor")
        return states

    here = resolve(source)
    goal = resolve(target)
    route = [resolve(x) for x in schedule.intermediates]
    if not route:
        ok = here == goal
        return Verdict(ok, None if ok else 0, None, "" if ok else "empty schedule")
    if route[-1] != goal:
        return Verdict(False, len(route) - 1, None, "schedule does not end at the target")
    if len(set(route) | {here}) != len(route) + 1:
        return Verdict(False, None, None, "an attractor is visited twice")

    for k, (ctrl, nxt) in enumerate(zip(schedule.controls, route)):
        starts = sorted(here) if strict else [min(here)]
        for s in starts:
            if strict:
                x = force_control(ctrl, s)
            else:
                if force_control(ctrl, s) != s ^ ctrl.mask:
                    return Verdict(False, k, s, "control does not flip the source state")
                x = s ^ ctrl.mask
            if not o.valid(schedule.mode, ctrl, x, nxt):
                return Verdict(False, k, x, f"{schedule.mode} step does not commit")
        if schedule.mode == "permanent" and not _residual_chain_ok(
                ctrl, nxt, route[k + 1:], schedule.controls[k + 1:]):
            return Verdict(False, k, None, "kept control disturbs a later attractor")
        here = nxt
    return Verdict(True)


def simulate(g: BooleanNetwork, s0: int, max_steps: int, seed: int) -> list[int]:
    """Random asynchronous run from ``s0``.

    Each step picks uniformly among the nodes whose update changes their
    value; the run stops early at a fixed point.  The returned trajectory
    starts with ``s0`` and holds at most ``max_steps`` transitions.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    rng = random.Random(seed)
    out = [s0]
    s = s0
    for _ in range(max_steps):
        movable = [i for i, f in enumerate(g.functions) if evaluate(f, s) != (s >> i) & 1]
        if not movable:
            break
        s ^= 1 << rng.choice(movable)
        out.append(s)
    return out


def random_network(n: int, seed: int, max_indegree: int = 3) -> BooleanNetwork:
    """Seeded random network: each node reads 1..max_indegree random regulators."""
    rng = random.Random(seed)
    names = tuple(f"x{i + 1}" for i in range(n))
    functions = []
    for _ in range(n):
        k = rng.randint(1, min(max_indegree, n))
        regs = rng.sample(range(n), k)
        terms = [Not(Var(r)) if rng.random() < 0.4 else Var(r) for r in regs]
        while len(terms) > 1:
            a = terms.pop(rng.randrange(len(terms)))
            b = terms.pop(rng.randrange(len(terms)))
            node = (And if rng.random() < 0.5 else Or)((a, b))
            terms.append(Not(node) if rng.random() < 0.15 else node)
        functions.append(terms[0])
    return BooleanNetwork(names, tuple(functions))


