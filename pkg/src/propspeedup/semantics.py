"""Truth-table semantics.

A truth table over m variables is packed into an int of 2**m bits: bit r
holds the value of the formula on row r, where variable i is true on row r
iff bit (i - 1) of r is set.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from .formula import Binary, Connective, Falsum, Formula, Not, Var


def evaluate(phi: Formula, valuation: Mapping[int, bool]) -> bool:
    if isinstance(phi, Var):
        return valuation[phi.index]
    if isinstance(phi, Falsum):
        return False
    if isinstance(phi, Not):
        return not evaluate(phi.child, valuation)
    assert isinstance(phi, Binary)
    a = evaluate(phi.left, valuation)
    b = evaluate(phi.right, valuation)
    if phi.op is Connective.AND:
        return a and b
    if phi.op is Connective.OR:
        return a or b
    if phi.op is Connective.IMPLIES:
        return (not a) or b
    return a == b


@lru_cache(maxsize=None)
def _variable_column(i: int, m: int) -> int:
    col = 0
    for row in range(1 << m):
        if row >> (i - 1) & 1:
            col |= 1 << row
    return col


@lru_cache(maxsize=1 << 16)
def truth_table(phi: Formula, m: int) -> int:
    full = (1 << (1 << m)) - 1
    if isinstance(phi, Var):
        if phi.index > m:
            raise ValueError(f"p{phi.index} is outside the first {m} variables")
        return _variable_column(phi.index, m)
    if isinstance(phi, Falsum):
        return 0
    if isinstance(phi, Not):
        return full & ~truth_table(phi.child, m)
    assert isinstance(phi, Binary)
    a = truth_table(phi.left, m)
    b = truth_table(phi.right, m)
    if phi.op is Connective.AND:
        return a & b
    if phi.op is Connective.OR:
        return a | b
    if phi.op is Connective.IMPLIES:
        return (full & ~a) | b
    return full & ~(a ^ b)


def variable_count(formulas: Iterable[Formula]) -> int:
    return max((max(f.variables(), default=0) for f in formulas), default=0)


def _rows_satisfying(theory: Iterable[Formula], m: int) -> int:
    rows = (1 << (1 << m)) - 1
    for phi in theory:
        rows &= truth_table(phi, m)
    return rows


def entails(theory: Iterable[Formula], goal: Formula, m: int | None = None) -> bool:
    """True iff every valuation satisfying all of ``theory`` satisfies ``goal``."""
    theory = list(theory)
    if m is None:
        m = max(variable_count(theory + [goal]), 1)
    return _rows_satisfying(theory, m) & ~truth_table(goal, m) == 0


def is_satisfiable(theory: Iterable[Formula], m: int | None = None) -> bool:
    theory = list(theory)
    if m is None:
        m = max(variable_count(theory), 1)
    return _rows_satisfying(theory, m) != 0


def is_tautology(phi: Formula, m: int | None = None) -> bool:
    return entails([], phi, m)
