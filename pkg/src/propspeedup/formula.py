"""Propositional formulas: syntax trees, depth, parsing and rendering.

Formulas are immutable and hashable. Equality is purely structural, so
``~~p1`` and ``p1`` are different formulas.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterator


class Connective(IntEnum):
    """Binary connectives in their canonical generation order."""

    IFF = 0
    IMPLIES = 1
    AND = 2
    OR = 3

    @property
    def symbol(self) -> str:
        return _ASCII[self]


BINARY_CONNECTIVES: tuple[Connective, ...] = (
    Connective.IFF,
    Connective.IMPLIES,
    Connective.AND,
    Connective.OR,
)

_ASCII = {
    Connective.IFF: "<->",
    Connective.IMPLIES: "->",
    Connective.AND: "&",
    Connective.OR: "|",
}


class Formula:
    __slots__ = ("_hash",)

    def subformulas(self) -> Iterator["Formula"]:
        """Yield every subformula (including self), children first."""
        yield self

    def variables(self) -> frozenset[int]:
        return frozenset(f.index for f in self.subformulas() if isinstance(f, Var))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)

    # Orderable so sets of formulas can be emitted deterministically.
    def __lt__(self, other: "Formula") -> bool:
        return sort_key(self) < sort_key(other)


class Var(Formula):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 1:
            raise ValueError(f"variable index must be positive, got {index}")
        self.index = index
        self._hash = hash((0, index))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Var) and other.index == self.index)

    __hash__ = Formula.__hash__

    def __repr__(self) -> str:
        return f"Var({self.index})"


class Not(Formula):
    __slots__ = ("child",)

    def __init__(self, child: Formula):
        self.child = child
        self._hash = hash((1, child._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Not)
            and other._hash == self._hash
            and other.child == self.child
        )

    __hash__ = Formula.__hash__

    def subformulas(self) -> Iterator[Formula]:
        yield from self.child.subformulas()
        yield self

    def __repr__(self) -> str:
        return f"Not({self.child!r})"


class Binary(Formula):
    __slots__ = ("op", "left", "right")

    def __init__(self, op: Connective, left: Formula, right: Formula):
        self.op = Connective(op)
        self.left = left
        self.right = right
        self._hash = hash((2, int(self.op), left._hash, right._hash))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Binary)
            and other._hash == self._hash
            and other.op == self.op
            and other.left == self.left
            and other.right == self.right
        )

    __hash__ = Formula.__hash__

    def subformulas(self) -> Iterator[Formula]:
        yield from self.left.subformulas()
        yield from self.right.subformulas()
        yield self

    def __repr__(self) -> str:
        return f"Binary({self.op.name}, {self.left!r}, {self.right!r})"


class Falsum(Formula):
    """The absurdity constant. Only appears inside proofs, never in P(n, m)."""

    __slots__ = ()

    def __init__(self):
        self._hash = -7

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Falsum)

    __hash__ = Formula.__hash__

    def __repr__(self) -> str:
        return "Falsum()"


FALSUM = Falsum()


def Iff(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.IFF, a, b)


def Implies(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.IMPLIES, a, b)


def And(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.AND, a, b)


def Or(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.OR, a, b)


def sort_key(f: Formula) -> tuple:
    if isinstance(f, Var):
        return (0, f.index)
    if isinstance(f, Falsum):
        return (-1,)
    if isinstance(f, Not):
        return (1, sort_key(f.child))
    assert isinstance(f, Binary)
    return (2, int(f.op), sort_key(f.left), sort_key(f.right))


def depth(f: Formula) -> int:
    """Least n such that ``f`` belongs to P(n, m).

    A negation sits one level above its operand. A binary node sits at the
    first level whose operand pool (previous level plus its negations)
    contains both operands.
    """
    if isinstance(f, Var):
        return 0
    if isinstance(f, Not):
        return depth(f.child) + 1
    if isinstance(f, Binary):
        return max(_operand_level(f.left), _operand_level(f.right))
    raise ValueError(f"{f!r} has no depth in the formula space")


def _operand_level(f: Formula) -> int:
    # first n with f in S(n) = P(n-1) u Neg(P(n-1))
    if isinstance(f, Not):
        return depth(f.child) + 1
    return depth(f) + 1


def connectives(f: Formula) -> set[Connective]:
    return {g.op for g in f.subformulas() if isinstance(g, Binary)}


# --------------------------------------------------------------------------
# Text syntax
#
#   iff     := imp ( "<->" iff )?          right associative
#   imp     := or ( "->" imp )?            right associative
#   or      := and ( "|" and )*            left associative
#   and     := unary ( "&" unary )*        left associative
#   unary   := "~" unary | atom
#   atom    := "p" digits | "_|_" | "(" iff ")"
#
# Unicode spellings (¬ ∧ ∨ → ↔ ⊥) and the TPTP spellings "=>" / "<=>" are
# accepted as aliases.
# --------------------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


_TOKEN_ALIASES = [
    ("<->", "<->"),
    ("<=>", "<->"),
    ("->", "->"),
    ("=>", "->"),
    ("_|_", "_|_"),
    ("$false", "_|_"),
    ("↔", "<->"),
    ("→", "->"),
    ("∧", "&"),
    ("∨", "|"),
    ("¬", "~"),
    ("⊥", "_|_"),
    ("~", "~"),
    ("&", "&"),
    ("|", "|"),
    ("(", "("),
    (")", ")"),
]


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for spelling, tok in _TOKEN_ALIASES:
            if text.startswith(spelling, i):
                tokens.append((tok, i))
                i += len(spelling)
                break
        else:
            if c == "p":
                j = i + 1
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise FormulaSyntaxError("expected variable number", text, j)
                tokens.append((text[i:j], i))
                i = j
            else:
                raise FormulaSyntaxError(f"unexpected character {c!r}", text, i)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def where(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text)

    def take(self) -> str:
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        if not self.tokens:
            raise FormulaSyntaxError("empty formula", self.text, 0)
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.text, self.where())
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of input", self.text, self.where())
        if tok == "(":
            self.take()
            f = self.iff()
            if self.peek() != ")":
                raise FormulaSyntaxError("expected ')'", self.text, self.where())
            self.take()
            return f
        if tok == "_|_":
            self.take()
            return FALSUM
        if tok.startswith("p"):
            where = self.where()
            self.take()
            index = int(tok[1:])
            if index < 1:
                raise FormulaSyntaxError("variables are numbered from 1", self.text, where)
            return Var(index)
        raise FormulaSyntaxError(f"unexpected {tok!r}", self.text, self.where())


def parse(text: str) -> Formula:
    """Parse infix text such as ``"p1 & ~p2 -> p3"``."""
    return _Parser(text).parse()


def parse_many(text: str) -> list[Formula]:
    """Parse a comma separated list of formulas (empty text gives [])."""
    parts = [p for p in _split_top_level(text) if p.strip()]
    return [parse(p) for p in parts]


def _split_top_level(text: str) -> list[str]:
    parts, level, start = [], 0, 0
    for i, c in enumerate(text):
        if c == "(":
            level += 1
        elif c == ")":
            level -= 1
        elif c == "," and level == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def render(f: Formula) -> str:
    """Deterministic text; every nested binary is parenthesised."""
    return _render(f, top=True)


def _render(f: Formula, top: bool) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Falsum):
        return "_|_"
    if isinstance(f, Not):
        return "~" + _render(f.child, top=False)
    assert isinstance(f, Binary)
    body = f"{_render(f.left, False)} {f.op.symbol} {_render(f.right, False)}"
    return body if top else f"({body})"
