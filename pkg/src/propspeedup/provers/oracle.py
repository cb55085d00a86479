"""Proof construction driven by a speed-up oracle.

Starting from the axioms, each round lists every formula obtainable from the
current list L by one rule application that opens no subproof, asks the
oracle whether adding it as an axiom shortens the proof of the goal, and
appends the best positive candidate. Candidates are compared pairwise: a
challenger x replaces the current champion c when x still helps once c is
present while c no longer helps once x is present. The run stops as soon as
the goal is in L.

The oracle here is exact (two calls to the minimal-length prover per
question), so the procedure is a demonstration of the reduction, not a fast
algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from ..formula import FALSUM, Binary, Connective, Formula, Not
from .natded import as_formula_list, default_depth_cap, min_proof_bfs, universe
from .proof import (
    DeductionMode,
    Line,
    Proof,
    ProverBudget,
    Rule,
    Status,
    check_proof,
    delta,
)


class OracleBudgetExhausted(RuntimeError):
    pass


class ExactDeltaOracle:
    """Decides delta_goal(base, base + extra) > 0 with the exact prover."""

    def __init__(self, goal: Formula, mode=DeductionMode.CLASSICAL, budget=None, *, cap=None):
        self.goal = goal
        self.mode = mode
        self.budget = budget or ProverBudget()
        self.cap = cap
        self._lengths: dict[frozenset, int] = {}
        self.calls = 0

    def length(self, formulas) -> int:
        key = frozenset(formulas)
        d = self._lengths.get(key)
        if d is None:
            self.calls += 1
            budget = self.budget
            if self.cap is not None:
                budget = ProverBudget(budget.max_lines, self.cap, budget.max_states, budget.time_limit)
            out = min_proof_bfs(sorted(key), self.goal, self.mode, budget, certify=False)
            if out.status is Status.NOT_ENTAILED:
                raise ValueError("the goal does not follow from the axioms")
            if out.status is not Status.PROVED:
                raise OracleBudgetExhausted(f"oracle ran out of budget on {len(key)} axioms")
            d = out.length
            self._lengths[key] = d
        return d

    def positive(self, base, extra) -> bool:
        base = list(base)
        return delta(self.length(base), self.length(base + list(extra))) > 0


@dataclass(frozen=True)
class Derivation:
    formula: Formula
    rule: Rule
    parents: tuple[Formula, ...]


@dataclass
class OracleResult:
    derivations: list[Derivation]
    length: int | None
    proof: Proof | None
    status: str  # "proved", "no-candidate" or "budget"
    oracle_calls: int = 0
    rounds: list[dict] = field(default_factory=list)


def one_step(current: list[Formula], pool: list[Formula], mode: DeductionMode) -> list[Derivation]:
    """Every new formula of ``pool`` reachable from ``current`` by one flat rule."""
    have = set(current)
    pool_set = set(pool)
    found: dict[Formula, Derivation] = {}

    def offer(f, rule, parents):
        if f in pool_set and f not in have and f not in found:
            found[f] = Derivation(f, rule, tuple(parents))

    for a in current:
        if isinstance(a, Binary):
            if a.op is Connective.AND:
                offer(a.left, Rule.AND_E_LEFT, [a])
                offer(a.right, Rule.AND_E_RIGHT, [a])
            elif a.op is Connective.IMPLIES and a.left in have:
                offer(a.right, Rule.IMP_E, [a.left, a])
            elif a.op is Connective.IFF:
                if a.left in have:
                    offer(a.right, Rule.IFF_E_LEFT, [a, a.left])
                if a.right in have:
                    offer(a.left, Rule.IFF_E_RIGHT, [a, a.right])
        if isinstance(a, Not):
            if a.child in have:
                offer(FALSUM, Rule.NOT_E, [a.child, a])
            if mode is DeductionMode.CLASSICAL and isinstance(a.child, Not):
                offer(a.child.child, Rule.DNE, [a])
    for a, b in product(current, repeat=2):
        offer(Binary(Connective.AND, a, b), Rule.AND_I, [a, b])
    for f in pool:
        if isinstance(f, Binary) and f.op is Connective.OR:
            if f.left in have:
                offer(f, Rule.OR_I_LEFT, [f.left])
            elif f.right in have:
                offer(f, Rule.OR_I_RIGHT, [f.right])
    if FALSUM in have:
        for f in pool:
            offer(f, Rule.FALSUM_E, [FALSUM])
    return sorted(found.values(), key=lambda d: pool.index(d.formula))


def _assemble(axioms, steps: list[Derivation], goal: Formula) -> Proof:
    by_formula = {d.formula: d for d in steps}
    used: list[Formula] = []

    def visit(f):
        if f in used:
            return
        if f in by_formula and f not in axioms:
            for p in by_formula[f].parents:
                visit(p)
        used.append(f)

    visit(goal)
    premises = [f for f in used if f in axioms]
    derived = [f for f in used if f not in axioms]
    number = {}
    lines = []
    for f in premises + derived:
        number[f] = len(lines) + 1
        if f in axioms:
            lines.append(Line(f, Rule.PREMISE))
        else:
            d = by_formula[f]
            lines.append(Line(f, d.rule, tuple(number[p] for p in d.parents)))
    return Proof(tuple(lines))


def oracle_guided_search(
    theory,
    goal: Formula,
    oracle: ExactDeltaOracle | None = None,
    budget: ProverBudget | None = None,
    mode: DeductionMode = DeductionMode.CLASSICAL,
) -> OracleResult:
    axioms = as_formula_list(theory)
    if oracle is None:
        cap = default_depth_cap(axioms, goal)
        oracle = ExactDeltaOracle(goal, mode, budget, cap=cap)
    if goal in axioms:
        return OracleResult([], 1, Proof((Line(goal, Rule.PREMISE),)), "proved", oracle.calls)
    cap = oracle.cap if oracle.cap is not None else default_depth_cap(axioms, goal)
    pool = [f for f in universe(axioms, goal, cap)]
    current = list(axioms)
    steps: list[Derivation] = []
    rounds = []
    try:
        while goal not in current:
            candidates = one_step(current, pool, mode)
            positive = [d for d in candidates if oracle.positive(current, [d.formula])]
            rounds.append({"candidates": len(candidates), "positive": len(positive)})
            if not positive:
                return OracleResult(steps, None, None, "no-candidate", oracle.calls, rounds)
            champion = positive[0]
            for x in positive[1:]:
                with_c = current + [champion.formula]
                with_x = current + [x.formula]
                if oracle.positive(with_c, [x.formula]) and not oracle.positive(with_x, [champion.formula]):
                    champion = x
            current.append(champion.formula)
            steps.append(champion)
    except OracleBudgetExhausted:
        return OracleResult(steps, None, None, "budget", oracle.calls, rounds)
    proof = _assemble(set(axioms), steps, goal)
    if not check_proof(proof, axioms, goal, mode):  # pragma: no cover - assembly bug guard
        raise AssertionError("assembled derivation does not check:\n" + proof.render())
    return OracleResult(steps, len(proof), proof, "proved", oracle.calls, rounds)
