"""Propositional binary resolution with a given-clause loop.

Clauses are frozensets of non-zero ints: ``+i`` for p_i and ``-i`` for ~p_i.
Because a clause is a set, merging duplicate literals (factoring) happens
automatically when a resolvent is built.

The proof length of a refutation is the number of clauses in the ancestry
of the empty clause: the input clauses actually used plus every resolvent
on the way. Nothing is minimal here; the loop picks the smallest clause
first (oldest first on ties), so adding axioms can change which refutation
is found and how long it is.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from itertools import product

from ..formula import Binary, Connective, Falsum, Formula, Not, Var, render
from .proof import ProverBudget, ProverOutcome, Status

Clause = frozenset


def _taut(c: Clause) -> bool:
    return any(-lit in c for lit in c)


def _join(a: set, b: set) -> set:
    return {x | y for x, y in product(a, b) if not _taut(x | y)}


def _cnf(f: Formula, positive: bool) -> set:
    if isinstance(f, Var):
        return {Clause({f.index if positive else -f.index})}
    if isinstance(f, Falsum):
        return {Clause()} if positive else set()
    if isinstance(f, Not):
        return _cnf(f.child, not positive)
    assert isinstance(f, Binary)
    a, b = f.left, f.right
    op = f.op
    if op is Connective.AND:
        if positive:
            return _cnf(a, True) | _cnf(b, True)
        return _join(_cnf(a, False), _cnf(b, False))
    if op is Connective.OR:
        if positive:
            return _join(_cnf(a, True), _cnf(b, True))
        return _cnf(a, False) | _cnf(b, False)
    if op is Connective.IMPLIES:
        if positive:
            return _join(_cnf(a, False), _cnf(b, True))
        return _cnf(a, True) | _cnf(b, False)
    # a <-> b  is (~a | b) & (a | ~b); its negation is (a | b) & (~a | ~b)
    if positive:
        return _join(_cnf(a, False), _cnf(b, True)) | _join(_cnf(a, True), _cnf(b, False))
    return _join(_cnf(a, True), _cnf(b, True)) | _join(_cnf(a, False), _cnf(b, False))


def _clause_key(c: Clause) -> tuple:
    return (len(c), sorted(c, key=lambda lit: (abs(lit), lit < 0)))


def clausify(f: Formula) -> list[Clause]:
    """Conjunctive normal form by distribution, tautologies dropped, sorted."""
    return sorted(_cnf(f, True), key=_clause_key)


def clause_text(c: Clause) -> str:
    if not c:
        return "[]"
    lits = sorted(c, key=lambda lit: (abs(lit), lit < 0))
    return " | ".join(f"p{l}" if l > 0 else f"~p{-l}" for l in lits)


@dataclass(frozen=True)
class Step:
    clause: Clause
    source: str  # "axiom", "negated-goal" or "resolve"
    origin: Formula | None = None  # input formula for input clauses
    parents: tuple[int, int] | None = None  # 1-based step numbers
    pivot: int | None = None  # literal of the first parent resolved upon


@dataclass(frozen=True)
class Refutation:
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def render(self) -> str:
        rows = []
        width = len(str(len(self.steps)))
        for k, s in enumerate(self.steps, 1):
            if s.source == "resolve":
                why = f"res {s.parents[0]},{s.parents[1]} on p{abs(s.pivot)}"
            else:
                why = f"{s.source} {render(s.origin)}"
            rows.append(f"{k:>{width}}  {clause_text(s.clause):<24}  {why}")
        return "\n".join(rows) + "\n"


def check_refutation(ref: Refutation, theory, goal: Formula) -> str | None:
    """First problem found in ``ref``, or None when it is a valid refutation."""
    allowed = {f: set(clausify(f)) for f in theory}
    goal_clauses = set(clausify(Not(goal)))
    if not ref.steps:
        return "empty refutation"
    for k, s in enumerate(ref.steps, 1):
        if s.source == "axiom":
            if s.origin not in allowed or s.clause not in allowed[s.origin]:
                return f"step {k}: not a clause of an axiom"
        elif s.source == "negated-goal":
            if s.clause not in goal_clauses:
                return f"step {k}: not a clause of the negated goal"
        elif s.source == "resolve":
            i, j = s.parents
            if not (1 <= i < k and 1 <= j < k):
                return f"step {k}: parents must precede the resolvent"
            a, b = ref.steps[i - 1].clause, ref.steps[j - 1].clause
            lit = s.pivot
            if lit not in a or -lit not in b:
                return f"step {k}: pivot p{abs(lit)} does not clash"
            if s.clause != (a - {lit}) | (b - {-lit}):
                return f"step {k}: wrong resolvent"
        else:
            return f"step {k}: unknown source {s.source!r}"
    if ref.steps[-1].clause:
        return "last clause is not empty"
    return None


class _Loop:
    def __init__(self, budget: ProverBudget, deadline):
        self.clauses: list[Clause] = []
        self.info: list[tuple] = []  # (source, origin, parents, pivot)
        self.seen: dict[Clause, int] = {}
        self.passive: list[tuple] = []
        self.active: list[int] = []
        self.budget = budget
        self.deadline = deadline
        self.work = 0

    def add(self, clause, info) -> int | None:
        if clause in self.seen or _taut(clause):
            return None
        cid = len(self.clauses)
        self.clauses.append(clause)
        self.info.append(info)
        self.seen[clause] = cid
        heapq.heappush(self.passive, (len(clause), cid))
        return cid

    def subsumed(self, c: Clause) -> bool:
        return any(self.clauses[a] <= c for a in self.active)

    def run(self) -> int | str:
        """Id of the empty clause, "saturated" or "budget"."""
        for cid, c in enumerate(self.clauses):
            if not c:
                return cid
        while self.passive:
            _, given = heapq.heappop(self.passive)
            g = self.clauses[given]
            if self.subsumed(g):
                continue
            self.active.append(given)
            for other in list(self.active):
                o = self.clauses[other]
                for lit in sorted(g, key=abs):
                    if -lit not in o:
                        continue
                    self.work += 1
                    if self.work > self.budget.max_states:
                        return "budget"
                    if self.deadline is not None and time.monotonic() > self.deadline:
                        return "budget"
                    res = (g - {lit}) | (o - {-lit})
                    if _taut(res) or res in self.seen or self.subsumed(res):
                        continue
                    cid = self.add(res, ("resolve", None, (given, other), lit))
                    if not res:
                        return cid
        return "saturated"

    def refutation(self, empty: int) -> Refutation:
        need = set()
        todo = [empty]
        while todo:
            c = todo.pop()
            if c in need:
                continue
            need.add(c)
            parents = self.info[c][2]
            if parents:
                todo.extend(parents)
        order = sorted(need)
        number = {c: k + 1 for k, c in enumerate(order)}
        steps = []
        for c in order:
            source, origin, parents, pivot = self.info[c]
            if parents:
                parents = (number[parents[0]], number[parents[1]])
            steps.append(Step(self.clauses[c], source, origin, parents, pivot))
        return Refutation(tuple(steps))


def resolution_prove(theory, goal: Formula, budget: ProverBudget | None = None) -> ProverOutcome:
    """Refute theory + {~goal}; D is the size of the refutation found."""
    from .natded import as_formula_list

    budget = budget or ProverBudget()
    premises = as_formula_list(theory)
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    loop = _Loop(budget, deadline)
    for f in premises:
        for c in clausify(f):
            loop.add(c, ("axiom", f, None, None))
    for c in clausify(Not(goal)):
        loop.add(c, ("negated-goal", goal, None, None))
    result = loop.run()
    if result == "saturated":
        return ProverOutcome(Status.NOT_ENTAILED, states=loop.work)
    if result == "budget":
        return ProverOutcome(Status.BUDGET_EXHAUSTED, states=loop.work,
                             diagnostics={"reason": "states", "clauses": len(loop.clauses)})
    ref = loop.refutation(result)
    problem = check_refutation(ref, premises, goal)
    if problem is not None:  # pragma: no cover - loop bug guard
        raise AssertionError(problem)
    return ProverOutcome(Status.PROVED, ref, len(ref), False, loop.work)
