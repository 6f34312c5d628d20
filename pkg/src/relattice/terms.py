"""Terms over the two lattice operations, plus equations and implications.

Concrete syntax:

    term  :=  join
    join  :=  or  ( 'v' or )*          lowest precedence, left associative
    or    :=  meet ( '+' meet )*
    meet  :=  atom ( '^' atom )*       highest precedence, left associative
    atom  :=  '(' term ')' | 'R00' | 'R01' | 'R10' | 'R11' | name

Statements combine equations:

    equation     :=  term '=' term
    implication  :=  equation ( '&' equation )* '->' equation
    equivalence  :=  equation '<->' equation

Names starting with a lowercase letter are variables (to be swept by a
checker); names starting with an uppercase letter are ground names (to be
looked up in an environment).  The single letter ``v`` is reserved for the
union operator.  ``+`` is sugar for the disjunction on unlike headers and
expands to its defining lattice term during evaluation and compilation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import ParseError, UnboundNameError, UniverseRequiredError
from .relations import (
    Relation,
    Universe,
    dd_or,
    dee,
    dum,
    inner_union,
    natural_join,
    top_empty,
    universal,
)

__all__ = [
    "Term",
    "Var",
    "Ground",
    "Const",
    "Meet",
    "Join",
    "OrOp",
    "R00",
    "R01",
    "R10",
    "R11",
    "Equation",
    "Implication",
    "parse_term",
    "parse_equation",
    "parse_statement",
    "to_text",
    "free_vars",
    "free_grounds",
    "normalize_ac",
    "equal_ac",
    "evaluate",
    "expand_or",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Ground:
    name: str


@dataclass(frozen=True)
class Const:
    symbol: str


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class OrOp:
    left: "Term"
    right: "Term"


Term = Union[Var, Ground, Const, Meet, Join, OrOp]

R00 = Const("R00")
R01 = Const("R01")
R10 = Const("R10")
R11 = Const("R11")

_CONSTS = {"R00": R00, "R01": R01, "R10": R10, "R11": R11}


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{to_text(self.lhs)} = {to_text(self.rhs)}"


@dataclass(frozen=True)
class Implication:
    """Premise equations and one conclusion; no premises means a plain law."""

    premises: tuple[Equation, ...]
    conclusion: Equation

    def __str__(self) -> str:
        if not self.premises:
            return str(self.conclusion)
        return " & ".join(map(str, self.premises)) + " -> " + str(self.conclusion)


_TOKEN = re.compile(r"\s*(<->|->|[()^+=&]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}", position=pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> str | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of input", position=len(self.text))
        self.index += 1
        return token

    def expect(self, token: str) -> None:
        got = self.peek()
        if got != token:
            where = self.tokens[self.index][1] if self.index < len(self.tokens) else len(self.text)
            raise ParseError(f"expected {token!r}, got {got!r}", position=where)
        self.index += 1

    def term(self) -> Term:
        node = self.or_level()
        while self.peek() == "v":
            self.index += 1
            node = Join(node, self.or_level())
        return node

    def or_level(self) -> Term:
        node = self.meet_level()
        while self.peek() == "+":
            self.index += 1
            node = OrOp(node, self.meet_level())
        return node

    def meet_level(self) -> Term:
        node = self.atom()
        while self.peek() == "^":
            self.index += 1
            node = Meet(node, self.atom())
        return node

    def atom(self) -> Term:
        token = self.take()
        if token == "(":
            node = self.term()
            self.expect(")")
            return node
        if token in _CONSTS:
            return _CONSTS[token]
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", token) and token != "v":
            if token[0].isupper():
                return Ground(token)
            return Var(token)
        where = self.tokens[self.index - 1][1]
        raise ParseError(f"unexpected token {token!r}", position=where)

    def equation(self) -> Equation:
        lhs = self.term()
        self.expect("=")
        return Equation(lhs, self.term())

    def statement(self) -> tuple[Implication, bool]:
        first = self.equation()
        if self.peek() == "<->":
            self.index += 1
            second = self.equation()
            self.done()
            return Implication((first,), second), True
        premises = [first]
        while self.peek() == "&":
            self.index += 1
            premises.append(self.equation())
        if self.peek() == "->":
            self.index += 1
            conclusion = self.equation()
            self.done()
            return Implication(tuple(premises), conclusion), False
        if len(premises) != 1:
            raise ParseError("'&' without a following '->'")
        self.done()
        return Implication((), premises[0]), False

    def done(self) -> None:
        if self.peek() is not None:
            token, where = self.tokens[self.index]
            raise ParseError(f"trailing input at {token!r}", position=where)


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    node = parser.term()
    parser.done()
    return node


def parse_equation(text: str) -> Equation:
    parser = _Parser(text)
    eq = parser.equation()
    parser.done()
    return eq


def parse_statement(text: str) -> tuple[Implication, bool]:
    """Parse a law statement; the flag reports whether it was an equivalence."""
    return _Parser(text).statement()


_PREC = {Join: 10, OrOp: 20, Meet: 30}


def to_text(term: Term) -> str:
    """Render with the fewest parentheses that re-parse to the same tree."""
    return _render(term, 0, None)


def _render(term: Term, parent_prec: int, parent_type) -> str:
    if isinstance(term, Var) or isinstance(term, Ground):
        return term.name
    if isinstance(term, Const):
        return term.symbol
    op = {Meet: "^", Join: "v", OrOp: "+"}[type(term)]
    prec = _PREC[type(term)]
    left = _render(term.left, prec, type(term))
    right = _render(term.right, prec + 1, type(term))
    text = f"{left} {op} {right}"
    if prec < parent_prec:
        return f"({text})"
    return text


def _walk(term: Term) -> Iterator[Term]:
    yield term
    if isinstance(term, (Meet, Join, OrOp)):
        yield from _walk(term.left)
        yield from _walk(term.right)


def free_vars(term: Term) -> tuple[str, ...]:
    """Variable names in first-occurrence order."""
    seen: dict[str, None] = {}
    for node in _walk(term):
        if isinstance(node, Var):
            seen.setdefault(node.name)
    return tuple(seen)


def free_grounds(term: Term) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for node in _walk(term):
        if isinstance(node, Ground):
            seen.setdefault(node.name)
    return tuple(seen)


def _flatten(term: Term, op) -> list[Term]:
    if isinstance(term, op):
        return _flatten(term.left, op) + _flatten(term.right, op)
    return [term]


def normalize_ac(term: Term) -> Term:
    """Canonical form modulo associativity and commutativity of ^ and v.

    Chains of one operator are flattened, the operands sorted by their
    rendered text, and the chain rebuilt left-nested.  The two arguments
    of + are sorted as well (it is commutative) but + chains are not
    flattened, since associativity of + is a theorem, not syntax.
    """
    if isinstance(term, (Meet, Join)):
        op = type(term)
        parts = [normalize_ac(p) for p in _flatten(term, op)]
        parts.sort(key=to_text)
        node = parts[0]
        for part in parts[1:]:
            node = op(node, part)
        return node
    if isinstance(term, OrOp):
        left = normalize_ac(term.left)
        right = normalize_ac(term.right)
        if to_text(right) < to_text(left):
            left, right = right, left
        return OrOp(left, right)
    return term


def equal_ac(a: Term, b: Term) -> bool:
    return normalize_ac(a) == normalize_ac(b)


def expand_or(term: Term) -> Term:
    """Replace every + node by its defining lattice term."""
    if isinstance(term, OrOp):
        left = expand_or(term.left)
        right = expand_or(term.right)
        return Join(Meet(left, Join(right, R11)), Meet(right, Join(left, R11)))
    if isinstance(term, (Meet, Join)):
        return type(term)(expand_or(term.left), expand_or(term.right))
    return term


def evaluate(
    term: Term,
    env: Mapping[str, Relation] | None = None,
    u: Universe | None = None,
) -> Relation:
    """Evaluate a term to a relation.

    Both variables and ground names resolve through ``env``.  R10, R11 and
    + need the universe; R00 and R01 do not.  When ``u`` is omitted, the
    universe is taken from the first environment value that carries one.
    """
    env = env or {}
    if u is None:
        u = next((r.universe for r in env.values() if r.universe is not None), None)
    missing = sorted(
        {n.name for n in _walk(term) if isinstance(n, (Var, Ground)) and n.name not in env}
    )
    if missing:
        raise UnboundNameError(missing)
    return _eval(term, env, u)


def _eval(term: Term, env: Mapping[str, Relation], u: Universe | None) -> Relation:
    if isinstance(term, (Var, Ground)):
        return env[term.name]
    if isinstance(term, Const):
        if term.symbol == "R00":
            return dum()
        if term.symbol == "R01":
            return dee()
        if u is None:
            raise UniverseRequiredError(f"{term.symbol} needs a universe")
        return top_empty(u) if term.symbol == "R10" else universal(u)
    if isinstance(term, Meet):
        return natural_join(_eval(term.left, env, u), _eval(term.right, env, u))
    if isinstance(term, Join):
        return inner_union(_eval(term.left, env, u), _eval(term.right, env, u))
    if isinstance(term, OrOp):
        return dd_or(_eval(term.left, env, u), _eval(term.right, env, u), u)
    raise TypeError(f"not a term: {term!r}")
