"""The bounded formula space P(n, m) and its propositions array.

P(0, m) is the first m variables. Level n appends, in this order, the new
negations ``~a`` for ``a`` first seen at level n-1, then every binary
``op(a, b)`` over the operand pool S(n) = P(n-1) + Neg(P(n-1)) that was not
already present, ordered by (op, position of a in S(n), position of b in
S(n)). Because S(n-1) is a prefix of S(n), the binaries already present at
level n-1 are exactly those whose operands both come from that prefix, so
positions can be computed arithmetically without materialising the array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .formula import (
    BINARY_CONNECTIVES,
    Binary,
    Connective,
    Formula,
    Not,
    Var,
    depth,
)


@dataclass(frozen=True)
class GenerationParams:
    n: int
    m: int
    ops: tuple[Connective, ...] = field(default=BINARY_CONNECTIVES)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.m < 1:
            raise ValueError("m must be positive")
        ops = tuple(sorted(set(Connective(o) for o in self.ops)))
        if not ops:
            raise ValueError("at least one binary connective is required")
        object.__setattr__(self, "ops", ops)

    def with_depth(self, n: int) -> "GenerationParams":
        return GenerationParams(n, self.m, self.ops)


class IndexOutOfRange(IndexError):
    pass


class NotInSpace(ValueError):
    """Raised when a formula is outside P(n, m)."""


@lru_cache(maxsize=None)
def _level_sizes(m: int, k: int, n: int) -> tuple[int, ...]:
    # f(0..n) for m variables and k binary connectives
    sizes = [m]
    prev_pool = 0
    for level in range(1, n + 1):
        f_prev = sizes[-1]
        f_prev2 = sizes[-2] if level >= 2 else 0
        pool = 2 * f_prev - f_prev2
        sizes.append(pool + k * (pool * pool - prev_pool * prev_pool))
        prev_pool = pool
    return tuple(sizes)


def _f(params: GenerationParams, level: int) -> int:
    if level < 0:
        return 0
    return _level_sizes(params.m, len(params.ops), params.n)[level]


def _pool(params: GenerationParams, level: int) -> int:
    """|S(level)|; zero for level 0 (no operand pool)."""
    if level <= 0:
        return 0
    return 2 * _f(params, level - 1) - _f(params, level - 2)


def count(params: GenerationParams) -> int:
    """f(n, m) = |P(n, m)|."""
    return _f(params, params.n)


def enumerate_formulas(params: GenerationParams) -> Iterator[Formula]:
    """Stream P(n, m) in generation order."""
    array: list[Formula] = []
    for i in range(1, params.m + 1):
        v = Var(i)
        array.append(v)
        yield v
    prev_start = 0  # start of the formulas first seen at the previous level
    pool_prev = 0
    for level in range(1, params.n + 1):
        f_prev = len(array)
        pool = array[:f_prev] + [Not(a) for a in array[prev_start:f_prev]]
        for neg in pool[f_prev:]:
            array.append(neg)
            yield neg
        for op in params.ops:
            for ia, a in enumerate(pool):
                lo = pool_prev if ia < pool_prev else 0
                for b in pool[lo:]:
                    f = Binary(op, a, b)
                    array.append(f)
                    yield f
        prev_start = f_prev
        pool_prev = len(pool)


def formula_at(i: int, params: GenerationParams) -> Formula:
    """The i-th formula (1-based) of the propositions array of P(n, m)."""
    total = count(params)
    if not 1 <= i <= total:
        raise IndexOutOfRange(f"index {i} outside 1..{total}")
    return _formula_at(i, params)


def _formula_at(i: int, params: GenerationParams) -> Formula:
    level = 0
    while i > _f(params, level):
        level += 1
    if level == 0:
        return Var(i)
    f1, f2 = _f(params, level - 1), _f(params, level - 2)
    r = i - f1 - 1
    new_negs = f1 - f2
    if r < new_negs:
        return Not(_formula_at(f2 + 1 + r, params))
    r -= new_negs
    s, s_prev = _pool(params, level), _pool(params, level - 1)
    block = s * s - s_prev * s_prev
    op = params.ops[r // block]
    w = r % block
    head = s_prev * (s - s_prev)
    if w < head:
        ia, ib = w // (s - s_prev), s_prev + w % (s - s_prev)
    else:
        w -= head
        ia, ib = s_prev + w // s, w % s
    return Binary(op, _pool_member(ia, level, params), _pool_member(ib, level, params))


def _pool_member(pos: int, level: int, params: GenerationParams) -> Formula:
    # pos is 0-based within S(level)
    f1, f2 = _f(params, level - 1), _f(params, level - 2)
    if pos < f1:
        return _formula_at(pos + 1, params)
    return Not(_formula_at(f2 + 1 + pos - f1, params))


def index_of(phi: Formula, params: GenerationParams) -> int:
    """Inverse of :func:`formula_at`."""
    _check_member(phi, params)
    return _index_of(phi, params)


def _check_member(phi: Formula, params: GenerationParams) -> None:
    for g in phi.subformulas():
        if isinstance(g, Var):
            if g.index > params.m:
                raise NotInSpace(f"variable p{g.index} exceeds m={params.m}")
        elif isinstance(g, Binary):
            if g.op not in params.ops:
                raise NotInSpace(f"connective {g.op.name} not allowed")
        elif not isinstance(g, Not):
            raise NotInSpace(f"{g!r} is not a formula of the space")
    d = depth(phi)
    if d > params.n:
        raise NotInSpace(f"depth {d} exceeds n={params.n}")


def _index_of(phi: Formula, params: GenerationParams) -> int:
    if isinstance(phi, Var):
        return phi.index
    level = depth(phi)
    f1, f2 = _f(params, level - 1), _f(params, level - 2)
    if isinstance(phi, Not):
        return f1 + 1 + (_index_of(phi.child, params) - f2 - 1)
    assert isinstance(phi, Binary)
    s, s_prev = _pool(params, level), _pool(params, level - 1)
    ia = _pool_position(phi.left, level, params)
    ib = _pool_position(phi.right, level, params)
    if ia < s_prev:
        w = ia * (s - s_prev) + (ib - s_prev)
    else:
        w = s_prev * (s - s_prev) + (ia - s_prev) * s + ib
    block = s * s - s_prev * s_prev
    r = params.ops.index(phi.op) * block + w
    return f1 + (f1 - f2) + r + 1


def _pool_position(phi: Formula, level: int, params: GenerationParams) -> int:
    f1, f2 = _f(params, level - 1), _f(params, level - 2)
    if depth(phi) <= level - 1:
        return _index_of(phi, params) - 1
    assert isinstance(phi, Not)
    return f1 + _index_of(phi.child, params) - f2 - 1
