"""History expressions: AST, parser, canonical printer and transforms.

Concrete syntax::

    history := seq
    seq     := alt { "&" alt }
    alt     := atom { "|" atom }
    atom    := IDENT | "(" history ")"

``&`` (or ``⊓``) sequences events, ``|`` (or ``⊔``) joins alternatives and
binds tighter, so ``a & b1 | b2 & c`` is ``a & (b1 | b2) & c``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import HistorySyntaxError, UnknownToken


@dataclass(frozen=True)
class EventRef:
    name: str

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Seq:
    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if len(self.steps) < 2:
            raise ValueError("Seq needs at least two steps")
        if any(isinstance(s, Seq) for s in self.steps):
            raise ValueError("Seq steps must not be Seq; use seq() to flatten")

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Alt:
    branches: tuple

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if len(self.branches) < 2:
            raise ValueError("Alt needs at least two branches")
        if any(isinstance(b, Alt) for b in self.branches):
            raise ValueError("Alt branches must not be Alt; use alt() to flatten")

    def __str__(self):
        return render(self)


HistoryExpr = Union[EventRef, Seq, Alt]


@dataclass(frozen=True)
class ElementaryPath:
    """An alternative-free sequence of event names."""

    events: tuple

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise ValueError("an elementary path has at least one event")

    def reversed(self) -> ElementaryPath:
        return ElementaryPath(self.events[::-1])

    def as_history(self) -> HistoryExpr:
        return seq(*map(EventRef, self.events))

    def __len__(self):
        return len(self.events)

    def __str__(self):
        return "·".join(self.events)


def _coerce(node):
    return EventRef(node) if isinstance(node, str) else node


def seq(*steps) -> HistoryExpr:
    """Sequence constructor that flattens nested sequences."""
    flat = []
    for s in map(_coerce, steps):
        flat.extend(s.steps if isinstance(s, Seq) else (s,))
    if not flat:
        raise ValueError("empty sequence")
    return flat[0] if len(flat) == 1 else Seq(tuple(flat))


def alt(*branches) -> HistoryExpr:
    """Alternative constructor that flattens nested alternatives."""
    flat = []
    for b in map(_coerce, branches):
        flat.extend(b.branches if isinstance(b, Alt) else (b,))
    if not flat:
        raise ValueError("empty alternative")
    return flat[0] if len(flat) == 1 else Alt(tuple(flat))


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<seq>[&⊓])|(?P<alt>[|⊔])"
    r"|(?P<lpar>\()|(?P<rpar>\))"
)

_DISPLAY = {"seq": "'&'", "alt": "'|'", "lpar": "'('", "rpar": "')'", "end": "end of input"}


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise UnknownToken(f"unknown token {text[pos]!r}", pos, text)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            self.fail(f"expected {_DISPLAY.get(kind, kind)}")
        self.i += 1
        return tok

    def fail(self, expectation):
        kind, value, pos = self.peek()
        found = _DISPLAY["end"] if kind == "end" else repr(value)
        raise HistorySyntaxError(f"{expectation}, found {found}", pos, self.text)

    def history(self):
        steps = [self.alt()]
        while self.peek()[0] == "seq":
            self.i += 1
            steps.append(self.alt())
        return seq(*steps)

    def alt(self):
        branches = [self.atom()]
        while self.peek()[0] == "alt":
            self.i += 1
            branches.append(self.atom())
        return alt(*branches)

    def atom(self):
        kind = self.peek()[0]
        if kind == "ident":
            return EventRef(self.take("ident")[1])
        if kind == "lpar":
            self.i += 1
            inner = self.history()
            self.take("rpar")
            return inner
        self.fail("expected an event name or '('")


def parse(text: str) -> HistoryExpr:
    """Parse a history expression into its flattened AST.

    Raises
    ------
    HistorySyntaxError
        With ``position`` pointing at the offending token.
    UnknownToken
        For characters outside the grammar.
    """
    p = _Parser(text)
    h = p.history()
    if p.peek()[0] != "end":
        p.fail("expected '&', '|' or end of input")
    return h


# --------------------------------------------------------------- printing

def render(h: HistoryExpr) -> str:
    """Canonical text. Alternatives are always parenthesized."""
    if isinstance(h, EventRef):
        return h.name
    if isinstance(h, Seq):
        return " & ".join(render(s) for s in h.steps)
    if isinstance(h, Alt):
        parts = (f"({render(b)})" if isinstance(b, Seq) else render(b) for b in h.branches)
        return "(" + " | ".join(parts) + ")"
    raise TypeError(f"not a history expression: {h!r}")


def outline(h: HistoryExpr, indent: str = "  ") -> str:
    """Indented tree view of the AST."""
    lines = []

    def walk(node, depth):
        pad = indent * depth
        if isinstance(node, EventRef):
            lines.append(f"{pad}Event {node.name}")
        elif isinstance(node, Seq):
            lines.append(f"{pad}Seq")
            for s in node.steps:
                walk(s, depth + 1)
        else:
            lines.append(f"{pad}Alt")
            for b in node.branches:
                walk(b, depth + 1)

    walk(h, 0)
    return "\n".join(lines)


def to_tree(h: HistoryExpr):
    """Nested plain-data form, used by the JSON output of ``parse``."""
    if isinstance(h, EventRef):
        return {"event": h.name}
    if isinstance(h, Seq):
        return {"seq": [to_tree(s) for s in h.steps]}
    return {"alt": [to_tree(b) for b in h.branches]}


# -------------------------------------------------------------- transforms

def reverse(h: HistoryExpr) -> HistoryExpr:
    """The inverse history: sequences reversed at every level."""
    if isinstance(h, EventRef):
        return h
    if isinstance(h, Seq):
        return Seq(tuple(reverse(s) for s in reversed(h.steps)))
    return Alt(tuple(reverse(b) for b in h.branches))


def expand_paths(h: HistoryExpr) -> list[ElementaryPath]:
    """All alternative-free paths of ``h``.

    Order is deterministic: slots vary left to right with the last slot
    fastest, each in declared branch order.
    """
    return [ElementaryPath(p) for p in _expand(h)]


def _expand(h):
    if isinstance(h, EventRef):
        return [(h.name,)]
    if isinstance(h, Alt):
        return [p for b in h.branches for p in _expand(b)]
    parts = [_expand(s) for s in h.steps]
    return [tuple(itertools.chain.from_iterable(combo)) for combo in itertools.product(*parts)]


def path_count(h: HistoryExpr) -> int:
    if isinstance(h, EventRef):
        return 1
    if isinstance(h, Alt):
        return sum(path_count(b) for b in h.branches)
    return math.prod(path_count(s) for s in h.steps)


def endpoints(h: HistoryExpr) -> tuple[HistoryExpr, HistoryExpr]:
    if isinstance(h, Seq):
        return h.steps[0], h.steps[-1]
    return h, h


def has_elementary_endpoints(h: HistoryExpr) -> bool:
    first, last = endpoints(h)
    return isinstance(first, EventRef) and isinstance(last, EventRef)


def event_names(h: HistoryExpr) -> list[str]:
    """Distinct event names in order of first appearance."""
    seen = {}
    stack = [h]
    order = []
    while stack:
        node = stack.pop()
        if isinstance(node, EventRef):
            if node.name not in seen:
                seen[node.name] = True
                order.append(node.name)
        else:
            children = node.steps if isinstance(node, Seq) else node.branches
            stack.extend(reversed(children))
    return order


def slots(h: HistoryExpr) -> tuple:
    """Top-level slots: the steps of a sequence, or ``h`` itself."""
    return h.steps if isinstance(h, Seq) else (h,)


def is_slot_form(h: HistoryExpr) -> bool:
    """True when every slot is an event or an alternative of events."""
    for s in slots(h):
        if isinstance(s, Seq):
            return False
        if isinstance(s, Alt) and not all(isinstance(b, EventRef) for b in s.branches):
            return False
    return True
