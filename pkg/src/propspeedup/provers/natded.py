"""Exact minimal-length natural deduction search.

The prover enumerates proofs in order of increasing line count L = 1, 2, ...
(iterative deepening), so the first proof it returns is a shortest one
within its search space. Each round is a goal-directed depth-first search
that builds the proof as a DAG of lines: an open goal is discharged either
by citing a line already written and in scope, or by writing a new line
whose rule opens further goals. Lines can be written in any enclosing
context, so a single line can serve goals in several subproofs. A partial
proof is abandoned once its line count plus a lower bound for the open goals
exceeds L.

The search space is every Fitch proof whose formulas come from
:func:`universe`: subformulas of the premises and goal, absurdity, and their
negations up to the intermediate-depth cap. Within that space the search is
complete: it never writes a line whose formula is still being derived further
up the same context, and no other choice is ruled out.

A finished DAG is laid out as a Fitch proof by ordering the lines and
subproofs of each context topologically; premises come first.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple

from ..formula import FALSUM, Binary, Connective, Falsum, Formula, Implies, Not, depth, sort_key
from ..semantics import entails, truth_table, variable_count
from .proof import (
    DeductionMode,
    Line,
    Proof,
    ProverBudget,
    ProverOutcome,
    Rule,
    Status,
    find_violation,
)

AND, OR, IMP, IFF = Connective.AND, Connective.OR, Connective.IMPLIES, Connective.IFF


def default_depth_cap(premises, goal: Formula) -> int:
    return max(depth(f) for f in [*premises, goal]) + 2


def universe(premises, goal: Formula, cap: int) -> list[Formula]:
    """Formulas allowed on proof lines, in a fixed order."""
    seen: dict[Formula, None] = {FALSUM: None}
    for f in [*premises, goal]:
        for g in f.subformulas():
            seen.setdefault(g, None)
    todo = [f for f in seen if not isinstance(f, Falsum)]
    while todo:
        f = todo.pop()
        neg = Not(f)
        if neg not in seen and depth(neg) <= cap:
            seen[neg] = None
            todo.append(neg)
    return sorted(seen, key=sort_key)


# A rule option is (rule, specs); a spec is ("goal", formula) for a cited line
# or ("sub", assumption, conclusion) for a cited subproof.


class _Space:
    def __init__(self, premises, goal, cap, mode):
        self.premises = set(premises)
        self.mode = mode
        self.m = max(variable_count([*premises, goal]), 1)
        self.root_mask = (1 << (1 << self.m)) - 1
        for p in premises:
            self.root_mask &= truth_table(p, self.m)
        self.formulas = universe(premises, goal, cap)
        self.members = set(self.formulas)
        self._options: dict[Formula, list] = {}
        self._valid: dict[tuple, list] = {}
        self.ors = [f for f in self.formulas if _is(f, OR)]
        self.and_left: dict[Formula, list] = {}
        self.and_right: dict[Formula, list] = {}
        self.imp_to: dict[Formula, list] = {}
        self.iff_left: dict[Formula, list] = {}
        self.iff_right: dict[Formula, list] = {}
        self.negated: list[Formula] = []
        for f in self.formulas:
            if isinstance(f, Not):
                self.negated.append(f.child)
            if not isinstance(f, Binary):
                continue
            if f.op is AND:
                self.and_left.setdefault(f.left, []).append(f)
                self.and_right.setdefault(f.right, []).append(f)
            elif f.op is IMP:
                self.imp_to.setdefault(f.right, []).append(f)
            elif f.op is IFF:
                self.iff_left.setdefault(f.left, []).append(f)
                self.iff_right.setdefault(f.right, []).append(f)

    def options(self, phi: Formula) -> list:
        opts = self._options.get(phi)
        if opts is not None:
            return opts
        opts = []
        # eliminations with a single cited line first: they are cheapest
        for f in self.and_left.get(phi, ()):
            opts.append((Rule.AND_E_LEFT, (("goal", f),)))
        for f in self.and_right.get(phi, ()):
            opts.append((Rule.AND_E_RIGHT, (("goal", f),)))
        nn = Not(Not(phi))
        if self.mode is DeductionMode.CLASSICAL and nn in self.members:
            opts.append((Rule.DNE, (("goal", nn),)))
        if isinstance(phi, Binary):
            a, b = phi.left, phi.right
            if phi.op is AND:
                opts.append((Rule.AND_I, (("goal", a), ("goal", b))))
            elif phi.op is OR:
                opts.append((Rule.OR_I_LEFT, (("goal", a),)))
                opts.append((Rule.OR_I_RIGHT, (("goal", b),)))
            elif phi.op is IMP:
                opts.append((Rule.IMP_I, (("sub", a, b),)))
            else:
                opts.append((Rule.IFF_I, (("sub", a, b), ("sub", b, a))))
        elif isinstance(phi, Not):
            opts.append((Rule.NOT_I, (("sub", phi.child, FALSUM),)))
        for f in self.imp_to.get(phi, ()):
            opts.append((Rule.IMP_E, (("goal", f.left), ("goal", f))))
        for f in self.iff_right.get(phi, ()):
            opts.append((Rule.IFF_E_LEFT, (("goal", f), ("goal", f.left))))
        for f in self.iff_left.get(phi, ()):
            opts.append((Rule.IFF_E_RIGHT, (("goal", f), ("goal", f.right))))
        if isinstance(phi, Falsum):
            for x in self.negated:
                opts.append((Rule.NOT_E, (("goal", x), ("goal", Not(x)))))
        else:
            opts.append((Rule.FALSUM_E, (("goal", FALSUM),)))
        for f in self.ors:
            opts.append((Rule.OR_E, (("goal", f), ("sub", f.left, phi), ("sub", f.right, phi))))
        self._options[phi] = opts
        return opts

    def table(self, phi: Formula) -> int:
        return truth_table(phi, self.m)

    def valid_options(self, phi: Formula, mask: int) -> list:
        """Options whose cited lines all hold under ``mask``."""
        key = (phi, mask)
        opts = self._valid.get(key)
        if opts is None:
            opts = [
                (rule, specs)
                for rule, specs in self.options(phi)
                if all(mask & ~self.table(_spec_formula(sp)) == 0 for sp in specs)
            ]
            self._valid[key] = opts
        return opts


class _Ctx:
    __slots__ = ("id", "parent", "assume", "assume_line", "depth", "ancestors", "concl", "mask")

    def __init__(self, id, parent, assume, assume_line, depth, ancestors, mask):
        self.id = id
        self.parent = parent
        self.assume = assume
        self.assume_line = assume_line
        self.depth = depth
        self.ancestors = ancestors  # frozenset of ids, self included
        self.concl = None
        self.mask = mask  # valuations satisfying the premises and open assumptions


class _LNode:
    __slots__ = ("id", "formula", "ctx", "rule", "refs")

    def __init__(self, id, formula, ctx, rule, refs):
        self.id = id
        self.formula = formula
        self.ctx = ctx
        self.rule = rule
        self.refs = refs  # list of ("L", line id) | ("S", ctx id) | None


class _Goal(NamedTuple):
    formula: Formula
    ctx: int
    concl: bool  # must be the last line written directly in ctx
    user: int | None  # citing line id (ordinary goals)
    slot: int | None
    chain: frozenset  # formulas under derivation above this goal in the same context


class _Stop(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class _DagSearch:
    def __init__(self, space: _Space, goal: Formula, max_states: int, deadline: float | None):
        self.space = space
        self.goal = goal
        self.max_states = max_states
        self.deadline = deadline
        self.states = 0
        self.solution: list[Line] | None = None

    def reset(self, bound: int):
        self.bound = bound
        root = _Ctx(0, None, None, None, 0, frozenset({0}), self.space.root_mask)
        self.ctxs = [root]
        self.lines: list[_LNode] = []
        self.by_formula: dict[Formula, list[int]] = {}
        self.premise_line: dict[Formula, int] = {}

    def run(self, bound: int) -> bool:
        self.reset(bound)
        top = _Goal(self.goal, 0, True, None, None, frozenset())
        return self._dfs((top,))

    # -- bookkeeping -----------------------------------------------------

    def _add_line(self, phi, ctx, rule, nrefs) -> int:
        lid = len(self.lines)
        self.lines.append(_LNode(lid, phi, ctx, rule, [None] * nrefs))
        self.by_formula.setdefault(phi, []).append(lid)
        return lid

    def _pop_line(self):
        ln = self.lines.pop()
        self.by_formula[ln.formula].pop()

    def _open_ctx(self, parent: int, assume: Formula) -> int:
        cid = len(self.ctxs)
        p = self.ctxs[parent]
        lid = self._add_line(assume, cid, Rule.ASSUMPTION, 0)
        mask = p.mask & self.space.table(assume)
        self.ctxs.append(_Ctx(cid, parent, assume, lid, p.depth + 1, p.ancestors | {cid}, mask))
        return cid

    def _pop_ctx(self):
        self.ctxs.pop()
        self._pop_line()

    def _fill(self, g: _Goal, lid: int | None):
        if g.concl:
            self.ctxs[g.ctx].concl = lid
        else:
            self.lines[g.user].refs[g.slot] = None if lid is None else ("L", lid)

    def _visible(self, phi, ctx) -> bool:
        anc = self.ctxs[ctx].ancestors
        return any(self.lines[l].ctx in anc for l in self.by_formula.get(phi, ()))

    def _lower_bound(self, agenda) -> int:
        """Admissible estimate of the lines still to be written.

        Every open goal without a visible line needs a line of its own, and
        distinct formulas need distinct lines. On top of that, the goal whose
        cheapest rule needs the most further lines adds that surplus.
        """
        need = 0
        busy = {g.formula for g in agenda if not g.concl}
        seen = set()
        extra = 0
        for g in agenda:
            if g.concl:
                if g.formula == self.ctxs[g.ctx].assume:
                    continue
                need += 1
            elif g.formula in seen:
                continue
            else:
                seen.add(g.formula)
                if self._visible(g.formula, g.ctx):
                    continue
                need += 1
            if extra < 2:
                extra = max(extra, self._surplus(g, busy))
        return need + extra

    def _surplus(self, g: _Goal, busy) -> int:
        ctx = self.ctxs[g.ctx]
        phi = g.formula
        if g.concl and ctx.parent is not None:
            parent_has = phi in busy or self._visible(phi, ctx.parent)
            best = 0 if parent_has else 1  # reiteration
        elif phi in self.space.premises:
            return 0
        else:
            best = 99
        for _rule, specs in self.space.valid_options(phi, ctx.mask):
            if best == 0:
                break
            cost = 0
            fresh = set()
            for sp in specs:
                if sp[0] == "sub":
                    cost += 1 if sp[2] == sp[1] else 2
                elif sp[1] not in busy and not self._visible(sp[1], g.ctx):
                    fresh.add(sp[1])
            cost += len(fresh)
            best = min(best, cost)
        return 0 if best == 99 else best

    def _item_at(self, lid: int, level: int):
        """The line itself, or the subproof of ``level`` that contains it."""
        c = self.lines[lid].ctx
        if c == level:
            return ("L", lid)
        while self.ctxs[c].parent != level:
            c = self.ctxs[c].parent
        return ("S", c)

    def _depends_on(self, lid: int, item) -> bool:
        """Whether line ``lid`` transitively needs ``item`` to be written first."""
        kind, x = item
        stack = [("L", lid)]
        seen = set()
        while stack:
            ref = stack.pop()
            if ref in seen:
                continue
            seen.add(ref)
            if ref == item:
                return True
            if ref[0] == "L":
                ln = self.lines[ref[1]]
                if kind == "S" and x in self.ctxs[ln.ctx].ancestors:
                    return True
                stack.extend(r for r in ln.refs if r is not None)
            else:
                s = ref[1]
                stack.extend(("L", l.id) for l in self.lines if s in self.ctxs[l.ctx].ancestors)
        return False

    # -- search ----------------------------------------------------------

    def _tick(self):
        self.states += 1
        if self.states > self.max_states:
            raise _Stop("states")
        if self.deadline is not None and self.states % 1024 == 0 and time.monotonic() > self.deadline:
            raise _Stop("time")

    def _dfs(self, agenda) -> bool:
        self._tick()
        if len(self.lines) + self._lower_bound(agenda) > self.bound:
            return False
        if not agenda:
            return self._finish()
        g, rest = agenda[0], agenda[1:]
        if g.concl:
            return self._conclude(g, rest)
        return self._discharge(g, rest)

    def _discharge(self, g: _Goal, rest) -> bool:
        phi = g.formula
        anc = self.ctxs[g.ctx].ancestors
        for lid in list(self.by_formula.get(phi, ())):
            ln = self.lines[lid]
            if ln.ctx not in anc:
                continue
            if self._depends_on(lid, self._item_at(g.user, ln.ctx)):
                continue
            self._fill(g, lid)
            if self._dfs(rest):
                return True
            self._fill(g, None)
        if phi in self.space.premises and phi not in self.premise_line:
            lid = self._add_line(phi, 0, Rule.PREMISE, 0)
            self.premise_line[phi] = lid
            self._fill(g, lid)
            if self._dfs(rest):
                return True
            self._fill(g, None)
            del self.premise_line[phi]
            self._pop_line()
        if phi in g.chain:
            return False
        c = g.ctx
        while c is not None:
            chain = g.chain if c == g.ctx else frozenset()
            if self._derive(g, c, chain, rest):
                return True
            c = self.ctxs[c].parent
        return False

    def _conclude(self, g: _Goal, rest) -> bool:
        ctx = self.ctxs[g.ctx]
        if g.ctx != 0:
            if g.formula == ctx.assume:
                self._fill(g, ctx.assume_line)
                if self._dfs(rest):
                    return True
                self._fill(g, None)
            lid = self._add_line(g.formula, g.ctx, Rule.REITERATION, 1)
            self._fill(g, lid)
            sub = _Goal(g.formula, ctx.parent, False, lid, 0, frozenset())
            if self._dfs((sub,) + rest):
                return True
            self._fill(g, None)
            self._pop_line()
        return self._derive(g, g.ctx, frozenset(), rest)

    def _derive(self, g: _Goal, c: int, chain, rest) -> bool:
        phi = g.formula
        chain = chain | {phi}
        mask = self.ctxs[c].mask
        if mask & ~self.space.table(phi):
            return False
        for rule, specs in self.space.valid_options(phi, mask):
            lid = self._add_line(phi, c, rule, len(specs))
            self._fill(g, lid)
            new_goals = []
            opened = 0
            for k, spec in enumerate(specs):
                if spec[0] == "goal":
                    new_goals.append(_Goal(spec[1], c, False, lid, k, chain))
                else:
                    sid = self._open_ctx(c, spec[1])
                    opened += 1
                    self.lines[lid].refs[k] = ("S", sid)
                    new_goals.append(_Goal(spec[2], sid, True, None, None, frozenset()))
            if self._dfs(tuple(new_goals) + rest):
                return True
            for _ in range(opened):
                self._pop_ctx()
            self._fill(g, None)
            self._pop_line()
        return False

    # -- layout ----------------------------------------------------------

    def _finish(self) -> bool:
        lines = self._layout()
        if lines is None:
            return False
        self.solution = lines
        return True

    def _layout(self) -> list[Line] | None:
        items: dict[int, list] = {c.id: [] for c in self.ctxs}
        for ln in self.lines:
            items[ln.ctx].append(("L", ln.id))
        for c in self.ctxs[1:]:
            items[c.parent].append(("S", c.id))
        edges: dict = {}

        def edge(a, b):
            if a != b:
                edges.setdefault(a, set()).add(b)

        for ln in self.lines:
            for r in ln.refs:
                if r is None:
                    return None
                level = self.lines[r[1]].ctx if r[0] == "L" else self.ctxs[r[1]].parent
                edge(r, self._item_at(ln.id, level))
        for c in self.ctxs:
            if c.id != 0:
                if c.concl is None:
                    return None
                head, tail = ("L", c.assume_line), ("L", c.concl)
                for it in items[c.id]:
                    if it != head:
                        edge(head, it)
                    if it != tail:
                        edge(it, tail)

        order: list[int] = []

        def place(cid: int) -> bool:
            todo = items[cid]
            indeg = {it: 0 for it in todo}
            for a in todo:
                for b in edges.get(a, ()):
                    if b in indeg:
                        indeg[b] += 1
            ready = [it for it in todo if indeg[it] == 0]
            placed = 0
            while ready:
                ready.sort(key=self._priority)
                it = ready.pop(0)
                placed += 1
                if it[0] == "L":
                    order.append(it[1])
                elif not place(it[1]):
                    return False
                for b in edges.get(it, ()):
                    if b in indeg:
                        indeg[b] -= 1
                        if indeg[b] == 0:
                            ready.append(b)
            return placed == len(todo)

        if not place(0):
            return None
        if self.lines[order[-1]].ctx != 0 or self.lines[order[-1]].formula != self.goal:
            return None
        number = {lid: k + 1 for k, lid in enumerate(order)}
        out = []
        for lid in order:
            ln = self.lines[lid]
            refs = []
            for kind, x in ln.refs:
                if kind == "L":
                    refs.append(number[x])
                else:
                    s = self.ctxs[x]
                    refs.append((number[s.assume_line], number[s.concl]))
            out.append(Line(ln.formula, ln.rule, tuple(refs), self.ctxs[ln.ctx].depth))
        return out

    def _priority(self, item):
        if item[0] == "L":
            ln = self.lines[item[1]]
            return (0 if ln.rule is Rule.PREMISE else 1, ln.id)
        return (1, self.ctxs[item[1]].assume_line)


@dataclass
class SearchResult:
    lines: list[Line] | None
    states: int
    exhausted: str | None  # "lines", "states" or "time" when no proof was found
    rounds: list[tuple[int, int]]  # (bound, states spent) per deepening round


def search(
    premises: list[Formula],
    goal: Formula,
    mode: DeductionMode,
    cap: int,
    max_lines: int,
    max_states: int,
    deadline: float | None = None,
    min_lines: int = 1,
) -> SearchResult:
    """Iterative deepening for a proof of at most ``max_lines`` lines."""
    space = _Space(premises, goal, cap, mode)
    dag = _DagSearch(space, goal, max_states, deadline)
    rounds = []
    try:
        for bound in range(max(min_lines, 1), max_lines + 1):
            before = dag.states
            found = dag.run(bound)
            rounds.append((bound, dag.states - before))
            if found:
                return SearchResult(dag.solution, dag.states, None, rounds)
    except _Stop as stop:
        return SearchResult(None, dag.states, stop.reason, rounds)
    return SearchResult(None, dag.states, "lines", rounds)


def _spec_formula(spec) -> Formula:
    # what a cited line or subproof asserts, for the soundness filter
    return spec[1] if spec[0] == "goal" else Implies(spec[1], spec[2])


def _is(f: Formula, op: Connective) -> bool:
    return isinstance(f, Binary) and f.op is op


def as_formula_list(theory) -> list[Formula]:
    if hasattr(theory, "formulas") and callable(theory.formulas):
        theory = theory.formulas()
    out: list[Formula] = []
    for f in theory:
        if f not in out:
            out.append(f)
    return out


def min_proof_bfs(
    theory,
    goal: Formula,
    mode: DeductionMode = DeductionMode.CLASSICAL,
    budget: ProverBudget | None = None,
    *,
    certify: bool = True,
) -> ProverOutcome:
    """Shortest Fitch proof of ``goal`` from ``theory``.

    Entailment is decided by truth tables first. A proof found under the
    depth cap is flagged ``minimal`` when a second search with the cap
    raised by one finds nothing shorter.
    """
    budget = budget or ProverBudget()
    premises = as_formula_list(theory)
    m = max(variable_count(premises + [goal]), 1)
    if not entails(premises, goal, m):
        return ProverOutcome.not_entailed()
    if goal in premises:
        proof = Proof((Line(goal, Rule.PREMISE),))
        return ProverOutcome(Status.PROVED, proof, 1, True, 1)

    cap = budget.max_depth if budget.max_depth is not None else default_depth_cap(premises, goal)
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    res = search(premises, goal, mode, cap, budget.max_lines, budget.max_states, deadline, 2)
    states = res.states
    if res.lines is None:
        return ProverOutcome(
            Status.BUDGET_EXHAUSTED,
            states=states,
            diagnostics={"reason": res.exhausted, "rounds": res.rounds, "cap": cap},
        )
    lines = res.lines
    minimal = False
    diag: dict = {"cap": cap, "rounds": res.rounds}
    if certify:
        wider = search(premises, goal, mode, cap + 1, len(lines) - 1,
                       budget.max_states, deadline, 2)
        states += wider.states
        if wider.lines is not None:
            lines = wider.lines
            diag["cap"] = cap + 1
        else:
            minimal = wider.exhausted == "lines"
        diag["certification"] = wider.exhausted or "found-shorter"
    proof = Proof(tuple(lines))
    problem = find_violation(proof, premises, goal, mode)
    if problem is not None:  # pragma: no cover - layout bug guard
        raise AssertionError(f"prover emitted an invalid proof: {problem}\n{proof.render()}")
    return ProverOutcome(Status.PROVED, proof, len(proof), minimal, states, diag)
