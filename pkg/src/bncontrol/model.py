"""Boolean networks, update expressions and controls.

States are plain integers: bit ``i`` holds the value of node ``i`` (nodes are
numbered in declaration order, starting at 0).  When printed, a state is
written node by node in declaration order, so for a network ``x1, x2, x3``
the string ``"110"`` means ``x1=1, x2=1, x3=0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

#: Default guard on the size of the explicit state space (2**MAX_NODES states).
MAX_NODES = 25

__all__ = [
    "MAX_NODES",
    "ParseError",
    "Const",
    "Var",
    "Not",
    "And",
    "Or",
    "BooleanNetwork",
    "Control",
    "ControlledNetwork",
    "parse_network",
    "parse_expr",
    "format_expr",
    "format_network",
    "evaluate",
    "apply_control",
    "force_control",
    "flips_for",
    "restrict",
    "hamming",
    "state_from_string",
    "state_to_string",
]


class ParseError(ValueError):
    """Malformed model text. ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"constant must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    child: "Expr"


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or needs at least two operands")


Expr = Union[Const, Var, Not, And, Or]


def _eval(expr, values):
    # works on Python bools and on numpy bool arrays alike
    if isinstance(expr, Var):
        return values[expr.index]
    if isinstance(expr, Const):
        return bool(expr.value)
    if isinstance(expr, Not):
        return np.logical_not(_eval(expr.child, values))
    if isinstance(expr, And):
        out = _eval(expr.children[0], values)
        for child in expr.children[1:]:
            out = np.logical_and(out, _eval(child, values))
        return out
    if isinstance(expr, Or):
        out = _eval(expr.children[0], values)
        for child in expr.children[1:]:
            out = np.logical_or(out, _eval(child, values))
        return out
    raise TypeError(f"not an expression: {expr!r}")


def evaluate(expr: Expr, s: Union[int, str, Sequence[int]]) -> int:
    """Value (0 or 1) of ``expr`` in state ``s``.

    ``s`` may be an integer state code, a bit string such as ``"011"`` or a
    sequence of bits indexed by node.
    """
    if isinstance(s, str):
        values = [c == "1" for c in s]
    elif isinstance(s, (int, np.integer)):
        code = int(s)
        values = _BitView(code)
    else:
        values = [bool(b) for b in s]
    return int(bool(_eval(expr, values)))


class _BitView:
    __slots__ = ("code",)

    def __init__(self, code: int):
        self.code = code

    def __getitem__(self, i: int) -> bool:
        return bool((self.code >> i) & 1)


def evaluate_all(expr: Expr, codes: np.ndarray) -> np.ndarray:
    """Vectorised evaluation of ``expr`` over an array of state codes."""
    cache: dict[int, np.ndarray] = {}

    class _Cols:
        def __getitem__(self, i):
            if i not in cache:
                cache[i] = ((codes >> i) & 1).astype(bool)
            return cache[i]

    out = _eval(expr, _Cols())
    if np.ndim(out) == 0:
        return np.full(codes.shape, bool(out))
    return np.asarray(out, dtype=bool)


def variables(expr: Expr) -> set[int]:
    """Node indices that ``expr`` reads."""
    if isinstance(expr, Var):
        return {expr.index}
    if isinstance(expr, Const):
        return set()
    if isinstance(expr, Not):
        return variables(expr.child)
    out: set[int] = set()
    for child in expr.children:
        out |= variables(child)
    return out


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<const>[01])(?![A-Za-z0-9_])|(?P<op>[!&|()]))"
)


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    tokens.append(("end", "", col0 + len(text) + 1))
    return tokens


class _ExprParser:
    # precedence: ! binds tightest, then &, then |
    def __init__(self, tokens, names: dict[str, int], line: int):
        self.tokens = tokens
        self.pos = 0
        self.names = names
        self.line = line

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok):
        raise ParseError(message, self.line, tok[2])

    def parse(self) -> Expr:
        expr = self.disjunction()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}", tok)
        return expr

    def disjunction(self):
        parts = [self.conjunction()]
        while self.peek()[:2] == ("op", "|"):
            self.take()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.negation()]
        while self.peek()[:2] == ("op", "&"):
            self.take()
            parts.append(self.negation())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def negation(self):
        if self.peek()[:2] == ("op", "!"):
            self.take()
            return Not(self.negation())
        return self.atom()

    def atom(self):
        tok = self.take()
        kind, text, _ = tok
        if kind == "ident":
            if text not in self.names:
                self.fail(f"undeclared variable {text}", tok)
            return Var(self.names[text])
        if kind == "const":
            return Const(int(text))
        if (kind, text) == ("op", "("):
            inner = self.disjunction()
            close = self.take()
            if close[:2] != ("op", ")"):
                self.fail("expected ')'", close)
            return inner
        if kind == "end":
            self.fail("unexpected end of expression", tok)
        self.fail(f"unexpected {text!r}", tok)


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _split_definitions(text: str):
    """Yield ``(line_no, name, name_col, expr_text, expr_col)`` per definition."""
    lines = text.splitlines()
    bool_net = False
    first = True
    for no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if first:
            first = False
            header = [p.strip().lower() for p in line.split(",")]
            if header == ["targets", "factors"]:
                bool_net = True
                continue
        sep = "," if bool_net else "="
        if sep not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError(f"expected '{sep}' in definition", no, col)
        lhs, rhs = line.split(sep, 1)
        name = lhs.strip()
        name_col = len(lhs) - len(lhs.lstrip()) + 1
        if not _NAME.match(name):
            raise ParseError(f"invalid node name {name!r}", no, name_col)
        yield no, name, name_col, rhs, len(lhs) + 1


def parse_expr(text: str, names: Sequence[str]) -> Expr:
    """Parse a single update expression over the given node names."""
    lookup = {name: i for i, name in enumerate(names)}
    return _ExprParser(_tokenize(text, 1, 0), lookup, 1).parse()


def parse_network(text: str) -> "BooleanNetwork":
    """Parse model text into a :class:`BooleanNetwork`.

    Two layouts are accepted: ``name = expr`` lines, or a BoolNet-style
    table whose first line is ``targets, factors`` followed by ``name, expr``
    lines.  ``!``, ``&`` and ``|`` are NOT, AND and OR (in decreasing
    precedence); ``0`` and ``1`` are constants and ``#`` starts a comment.
    """
    defs = list(_split_definitions(text))
    names: dict[str, int] = {}
    for no, name, col, _, _ in defs:
        if name in names:
            raise ParseError(f"duplicate definition of {name}", no, col)
        names[name] = len(names)
    if not names:
        raise ParseError("model defines no nodes")
    functions = []
    for no, name, _, rhs, col0 in defs:
        tokens = _tokenize(rhs, no, col0)
        functions.append(_ExprParser(tokens, names, no).parse())
    return BooleanNetwork(tuple(names), tuple(functions))


def format_expr(expr: Expr, names: Sequence[str]) -> str:
    def fmt(e, parent):
        if isinstance(e, Var):
            return names[e.index]
        if isinstance(e, Const):
            return str(e.value)
        if isinstance(e, Not):
            return "!" + fmt(e.child, 3)
        level, op = (2, " & ") if isinstance(e, And) else (1, " | ")
        body = op.join(fmt(c, level) for c in e.children)
        # same-level nesting is parenthesised so the tree round-trips exactly
        return f"({body})" if parent >= level else body

    return fmt(expr, 0)


def format_network(g: "BooleanNetwork") -> str:
    return "".join(
        f"{name} = {format_expr(f, g.names)}\n" for name, f in zip(g.names, g.functions)
    )


# ---------------------------------------------------------------------------
# Networks and controls


@dataclass(frozen=True)
class BooleanNetwork:
    """Ordered node names and one update expression per node."""

    names: tuple
    functions: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "functions", tuple(self.functions))
        if len(self.names) == 0:
            raise ValueError("a network needs at least one node")
        if len(self.names) != len(self.functions):
            raise ValueError("one update function per node is required")
        if len(set(self.names)) != len(self.names):
            raise ValueError("node names must be unique")
        n = len(self.names)
        for f in self.functions:
            bad = [i for i in variables(f) if not 0 <= i < n]
            if bad:
                raise ValueError(f"expression refers to unknown node index {bad[0]}")

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown node {name!r}") from None

    def regulators(self, i: int) -> set[int]:
        return variables(self.functions[i])

    @property
    def num_edges(self) -> int:
        """Number of regulator -> target pairs in the wiring diagram."""
        return sum(len(self.regulators(i)) for i in range(self.n))


@dataclass(frozen=True)
class Control:
    """Nodes forced to 0 (``zero``) and to 1 (``one``)."""

    zero: frozenset = field(default_factory=frozenset)
    one: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "zero", frozenset(self.zero))
        object.__setattr__(self, "one", frozenset(self.one))
        if self.zero & self.one:
            raise ValueError("a node cannot be forced to both 0 and 1")
        if any(i < 0 for i in self.zero | self.one):
            raise ValueError("node indices must be non-negative")

    @property
    def size(self) -> int:
        return len(self.zero) + len(self.one)

    def __len__(self) -> int:
        return self.size

    @property
    def nodes(self) -> frozenset:
        return self.zero | self.one

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.nodes)

    @property
    def one_mask(self) -> int:
        return sum(1 << i for i in self.one)

    def minus(self, nodes: Iterable[int]) -> "Control":
        """Drop the given nodes from both sets."""
        nodes = frozenset(nodes)
        return Control(self.zero - nodes, self.one - nodes)

    def sort_key(self):
        return (self.size, tuple(sorted(self.nodes)), tuple(sorted(self.one)))

    def describe(self, names: Sequence[str]) -> str:
        parts = [f"{names[i]}=0" for i in sorted(self.zero)]
        parts += [f"{names[i]}=1" for i in sorted(self.one)]
        return "{" + ", ".join(parts) + "}"


def apply_control(c: Control, s: int) -> int:
    """Flip the controlled nodes of ``s``.

    Every node in ``c.zero`` must currently be 1 and every node in ``c.one``
    must be 0; a control that asks a node to take its present value is
    rejected with ``ValueError``.
    """
    stale = [i for i in c.zero if not (s >> i) & 1] + [i for i in c.one if (s >> i) & 1]
    if stale:
        raise ValueError(f"control is inconsistent with state at node(s) {sorted(stale)}")
    return s ^ c.mask


def force_control(c: Control, s: int) -> int:
    """Set the controlled nodes of ``s`` to their control values (no consistency check)."""
    return (s & ~c.mask) | c.one_mask


def flips_for(s: int, nodes: Iterable[int]) -> Control:
    """The control that flips exactly ``nodes`` in state ``s``."""
    nodes = set(nodes)
    return Control(
        frozenset(i for i in nodes if (s >> i) & 1),
        frozenset(i for i in nodes if not (s >> i) & 1),
    )


@dataclass(frozen=True)
class ControlledNetwork:
    """A network whose controlled nodes have constant update functions."""

    base: BooleanNetwork
    control: Control

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def names(self) -> tuple:
        return self.base.names

    @property
    def functions(self) -> tuple:
        c = self.control
        return tuple(
            Const(0) if i in c.zero else Const(1) if i in c.one else f
            for i, f in enumerate(self.base.functions)
        )

    def in_subspace(self, s: int) -> bool:
        return (s & self.control.mask) == self.control.one_mask

    def subspace(self) -> list[int]:
        """States consistent with the control, ascending."""
        return [s for s in range(1 << self.n) if self.in_subspace(s)]


def restrict(g: BooleanNetwork, c: Control) -> ControlledNetwork:
    if any(i >= g.n for i in c.nodes):
        raise ValueError("control refers to a node outside the network")
    return ControlledNetwork(g, c)


def hamming(s: int, t: int) -> int:
    return bin(s ^ t).count("1")


def state_from_string(text: str) -> int:
    """``"110"`` -> code with node 0 and node 1 set."""
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a bit string: {text!r}")
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def state_to_string(s: int, n: int) -> str:
    return "".join("1" if (s >> i) & 1 else "0" for i in range(n))
