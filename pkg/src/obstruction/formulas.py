"""Epistemic logic formulas as a hash-consed DAG.

Structurally identical subformulas are interned to a single node, so node
identity doubles as structural equality and per-node caches remain valid
across models. An empty disjunction is the false constant; an empty
conjunction is true, encoded as the negation of false.

Text grammar (used by :func:`parse` and :func:`render`)::

    phi := "false" | "input(" a "," v ")" | "!" phi
         | phi "&" phi | phi "|" phi
         | "K[" a "]" phi | "C[{" a "," ... "}]" phi | "D[{" a "," ... "}]" phi
         | "(" phi ")"

Prefix operators bind tightest, then "&", then "|"; the binary operators
associate to the left and are kept flattened, so rendering and parsing are
mutually inverse.
"""

from itertools import count
from typing import Iterable

_TABLE: dict = {}
_UIDS = count()


class Formula:
    """One interned node of the formula DAG. Build via the module constructors."""

    __slots__ = ("uid", "kind", "agent", "value", "agents", "children")

    def __init__(self, kind, agent, value, agents, children):
        self.uid = next(_UIDS)
        self.kind = kind
        self.agent = agent
        self.value = value
        self.agents = agents
        self.children = children

    def __repr__(self) -> str:
        return f"Formula<{render(self)}>"

    def __str__(self) -> str:
        return render(self)


def _intern(kind, agent=None, value=None, agents=None, children=()) -> Formula:
    key = (kind, agent, value, agents, children)
    node = _TABLE.get(key)
    if node is None:
        node = _TABLE.setdefault(key, Formula(kind, agent, value, agents, children))
    return node


def _check(phi) -> Formula:
    if not isinstance(phi, Formula):
        raise TypeError(f"expected a Formula, got {phi!r}")
    return phi


def _flatten(kind: str, parts: Iterable[Formula]) -> tuple[Formula, ...]:
    out: list[Formula] = []
    for p in parts:
        _check(p)
        if p.kind == kind:
            out.extend(p.children)
        else:
            out.append(p)
    return tuple(out)


FALSE = _intern("false")


def atom(agent: int, value: int) -> Formula:
    """The proposition that `agent` received input `value`."""
    if not isinstance(agent, int) or not isinstance(value, int):
        raise TypeError("atom takes integer agent and value")
    if agent < 0:
        raise ValueError("agent ids are nonnegative")
    return _intern("atom", agent=agent, value=value)


def or_(*parts: Formula) -> Formula:
    children = _flatten("or", parts)
    if not children:
        return FALSE
    if len(children) == 1:
        return children[0]
    return _intern("or", children=children)


def and_(*parts: Formula) -> Formula:
    children = _flatten("and", parts)
    if not children:
        return TRUE
    if len(children) == 1:
        return children[0]
    return _intern("and", children=children)


def not_(phi: Formula) -> Formula:
    return _intern("not", children=(_check(phi),))


def know(agent: int, phi: Formula) -> Formula:
    if not isinstance(agent, int) or agent < 0:
        raise ValueError("agent ids are nonnegative integers")
    return _intern("know", agent=agent, children=(_check(phi),))


def common(agents: Iterable[int], phi: Formula) -> Formula:
    return _intern("common", agents=frozenset(agents), children=(_check(phi),))


def distributed(agents: Iterable[int], phi: Formula) -> Formula:
    return _intern("dist", agents=frozenset(agents), children=(_check(phi),))


TRUE = not_(FALSE)


_MODAL_KINDS = ("know", "common", "dist")
_HAS_MODAL: dict[int, bool] = {}
_POSITIVE: dict[int, bool] = {}
_AGENTS: dict[int, frozenset[int]] = {}


def has_modal(phi: Formula) -> bool:
    cached = _HAS_MODAL.get(phi.uid)
    if cached is None:
        cached = phi.kind in _MODAL_KINDS or any(has_modal(c) for c in phi.children)
        _HAS_MODAL[phi.uid] = cached
    return cached


def is_positive(phi: Formula) -> bool:
    """True when no knowledge operator occurs inside a negation."""
    cached = _POSITIVE.get(phi.uid)
    if cached is None:
        if phi.kind == "not":
            cached = not has_modal(phi.children[0])
        else:
            cached = all(is_positive(c) for c in phi.children)
        _POSITIVE[phi.uid] = cached
    return cached


def agents_of(phi: Formula) -> frozenset[int]:
    """All agent ids mentioned by atoms or modal operators."""
    cached = _AGENTS.get(phi.uid)
    if cached is None:
        own: frozenset[int] = frozenset()
        if phi.kind == "atom" or phi.kind == "know":
            own = frozenset((phi.agent,))
        elif phi.kind in ("common", "dist"):
            own = phi.agents
        cached = own.union(*(agents_of(c) for c in phi.children))
        _AGENTS[phi.uid] = cached
    return cached


_LEVEL = {
    "false": 3,
    "atom": 3,
    "not": 2,
    "know": 2,
    "common": 2,
    "dist": 2,
    "and": 1,
    "or": 0,
}


def _group(agents: frozenset[int]) -> str:
    return "{" + ",".join(str(a) for a in sorted(agents)) + "}"


def _wrap(phi: Formula, min_level: int) -> str:
    s = render(phi)
    return s if _LEVEL[phi.kind] >= min_level else f"({s})"


def render(phi: Formula) -> str:
    kind = phi.kind
    if kind == "false":
        return "false"
    if kind == "atom":
        return f"input({phi.agent},{phi.value})"
    if kind == "not":
        return "!" + _wrap(phi.children[0], 2)
    if kind == "know":
        return f"K[{phi.agent}] " + _wrap(phi.children[0], 2)
    if kind == "common":
        return f"C[{_group(phi.agents)}] " + _wrap(phi.children[0], 2)
    if kind == "dist":
        return f"D[{_group(phi.agents)}] " + _wrap(phi.children[0], 2)
    if kind == "and":
        return " & ".join(_wrap(c, 2) for c in phi.children)
    return " | ".join(_wrap(c, 1) for c in phi.children)


class ParseError(ValueError):
    """Formula text that does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_SYMBOLS = set("!&|(){}[],")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, size = 0, len(text)
    while i < size:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(("sym", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < size and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < size and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("word", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", size))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        if tok[0] != "end":
            self.pos += 1
        return tok

    def expect(self, symbol: str) -> None:
        kind, value, at = self.peek()
        if kind != "sym" or value != symbol:
            raise ParseError(f"expected {symbol!r}, found {value or 'end of input'!r}", at)
        self.advance()

    def expect_int(self) -> int:
        kind, value, at = self.peek()
        if kind != "int":
            raise ParseError(f"expected a number, found {value or 'end of input'!r}", at)
        self.advance()
        return int(value)

    def agent_set(self) -> frozenset[int]:
        self.expect("{")
        agents = [self.expect_int()]
        while self.peek()[:2] == ("sym", ","):
            self.advance()
            agents.append(self.expect_int())
        self.expect("}")
        return frozenset(agents)

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek()[:2] == ("sym", "|"):
            self.advance()
            parts.append(self.conjunction())
        return or_(*parts)

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek()[:2] == ("sym", "&"):
            self.advance()
            parts.append(self.unary())
        return and_(*parts)

    def unary(self) -> Formula:
        kind, value, at = self.peek()
        if (kind, value) == ("sym", "!"):
            self.advance()
            return not_(self.unary())
        if kind == "word" and value in ("K", "C", "D"):
            self.advance()
            self.expect("[")
            if value == "K":
                agent = self.expect_int()
                self.expect("]")
                return know(agent, self.unary())
            agents = self.agent_set()
            self.expect("]")
            ctor = common if value == "C" else distributed
            return ctor(agents, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, value, at = self.peek()
        if (kind, value) == ("word", "false"):
            self.advance()
            return FALSE
        if (kind, value) == ("word", "input"):
            self.advance()
            self.expect("(")
            agent = self.expect_int()
            self.expect(",")
            val = self.expect_int()
            self.expect(")")
            return atom(agent, val)
        if (kind, value) == ("sym", "("):
            self.advance()
            phi = self.disjunction()
            self.expect(")")
            return phi
        raise ParseError(f"expected a formula, found {value or 'end of input'!r}", at)


def parse(text: str) -> Formula:
    """Parse formula text into the interned DAG."""
    parser = _Parser(text)
    phi = parser.disjunction()
    kind, value, at = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {value!r}", at)
    return phi
