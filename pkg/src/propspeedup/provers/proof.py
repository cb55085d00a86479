"""Fitch-style proof objects, the proof checker, and prover outcome types."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

from ..formula import FALSUM, Binary, Connective, Falsum, Formula, Not, render


class Rule(Enum):
    PREMISE = "Premise"
    ASSUMPTION = "Assumption"
    REITERATION = "R"
    AND_I = "&I"
    AND_E_LEFT = "&E-left"
    AND_E_RIGHT = "&E-right"
    OR_I_LEFT = "|I-left"
    OR_I_RIGHT = "|I-right"
    OR_E = "|E"
    IMP_I = "->I"
    IMP_E = "->E"
    IFF_I = "<->I"
    IFF_E_LEFT = "<->E-left"
    IFF_E_RIGHT = "<->E-right"
    NOT_I = "~I"
    NOT_E = "~E"
    FALSUM_E = "_|_E"
    DNE = "DNE"


class DeductionMode(Enum):
    CLASSICAL = "classical"
    INTUITIONISTIC = "intuitionistic"

    def allows(self, rule: Rule) -> bool:
        return self is DeductionMode.CLASSICAL or rule is not Rule.DNE


Ref = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class Line:
    formula: Formula
    rule: Rule
    refs: tuple[Ref, ...] = ()
    depth: int = 0


@dataclass(frozen=True)
class Proof:
    lines: tuple[Line, ...]

    def __len__(self) -> int:
        return len(self.lines)

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def premises(self) -> list[Formula]:
        return [ln.formula for ln in self.lines if ln.rule is Rule.PREMISE]

    def render(self) -> str:
        return render_proof(self)


def _ref_text(ref: Ref) -> str:
    if isinstance(ref, tuple):
        return f"{ref[0]}-{ref[1]}"
    return str(ref)


def render_proof(proof: Proof) -> str:
    """Plain-text Fitch layout: one numbered line per proof line.

    Each open subproof adds a ``|`` bar; a ``|---`` rule closes the block of
    premises and follows every assumption.
    """
    texts = [render(ln.formula) for ln in proof.lines]
    bars = [("| " * (ln.depth + 1)) for ln in proof.lines]
    width = max(len(b) + len(t) for b, t in zip(bars, texts))
    num_w = len(str(len(proof.lines)))
    out = []
    for k, ln in enumerate(proof.lines):
        just = ln.rule.value
        if ln.refs:
            just += " " + ",".join(_ref_text(r) for r in ln.refs)
        body = (bars[k] + texts[k]).ljust(width)
        out.append(f"{k + 1:>{num_w}} {body}  {just}".rstrip())
        nxt = proof.lines[k + 1] if k + 1 < len(proof.lines) else None
        last_premise = ln.rule is Rule.PREMISE and (nxt is None or nxt.rule is not Rule.PREMISE)
        if ln.rule is Rule.ASSUMPTION or last_premise:
            out.append(" " * num_w + " " + "| " * ln.depth + "|---")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# Checking
# --------------------------------------------------------------------------


@dataclass
class _Subproof:
    start: int
    end: int | None
    path: tuple[int, ...]  # enclosing subproof starts, outermost first


def find_violation(
    proof: Proof,
    theory: Iterable[Formula],
    goal: Formula,
    mode: DeductionMode = DeductionMode.CLASSICAL,
) -> str | None:
    """Return a description of the first defect, or None for a valid proof."""
    theory = set(theory)
    lines = proof.lines
    if not lines:
        return "empty proof"
    paths: list[tuple[int, ...]] = []
    stack: list[_Subproof] = []
    subproofs: dict[tuple[int, int], _Subproof] = {}

    def close_to(depth: int, k: int) -> str | None:
        while len(stack) > depth:
            sp = stack.pop()
            sp.end = k - 1
            # the conclusion must sit directly inside the subproof
            if paths[k - 2] != sp.path + (sp.start,):
                return f"subproof starting at line {sp.start} ends inside a nested subproof"
            subproofs[(sp.start, sp.end)] = sp
        return None

    for k, ln in enumerate(lines, start=1):
        if ln.depth < 0:
            return f"line {k}: negative depth"
        if ln.rule is Rule.ASSUMPTION:
            if not 1 <= ln.depth <= len(stack) + 1:
                return f"line {k}: assumption at depth {ln.depth} cannot open here"
            err = close_to(ln.depth - 1, k)
            if err:
                return f"line {k}: {err}"
            stack.append(_Subproof(k, None, tuple(s.start for s in stack)))
        else:
            if ln.depth > len(stack):
                return f"line {k}: depth {ln.depth} without an open subproof"
            err = close_to(ln.depth, k)
            if err:
                return f"line {k}: {err}"
        paths.append(tuple(s.start for s in stack))

        if not mode.allows(ln.rule):
            return f"line {k}: rule {ln.rule.value} is not available in {mode.value} mode"
        err = _check_line(k, ln, lines, paths, subproofs, theory)
        if err:
            return f"line {k}: {err}"

    if lines[-1].depth != 0:
        return "proof ends inside a subproof"
    if lines[-1].formula != goal:
        return f"last line is {render(lines[-1].formula)}, expected {render(goal)}"
    return None


def check_proof(
    proof: Proof,
    theory: Iterable[Formula],
    goal: Formula,
    mode: DeductionMode = DeductionMode.CLASSICAL,
) -> bool:
    return find_violation(proof, theory, goal, mode) is None


def _check_line(k, ln: Line, lines, paths, subproofs, theory) -> str | None:
    path = paths[k - 1]

    def line_ref(r) -> Formula:
        if not isinstance(r, int) or not 1 <= r < k:
            raise _Bad(f"reference {r!r} does not point to an earlier line")
        if paths[r - 1] != path[: len(paths[r - 1])]:
            raise _Bad(f"line {r} is not in scope")
        return lines[r - 1].formula

    def sub_ref(r) -> tuple[Formula, Formula]:
        if not isinstance(r, tuple) or len(r) != 2:
            raise _Bad(f"reference {r!r} is not a subproof range")
        sp = subproofs.get(tuple(r))
        if sp is None or sp.end >= k:
            raise _Bad(f"{r[0]}-{r[1]} is not a closed subproof")
        if sp.path != path[: len(sp.path)]:
            raise _Bad(f"subproof {r[0]}-{r[1]} is not in scope")
        return lines[r[0] - 1].formula, lines[r[1] - 1].formula

    def arity(n):
        if len(ln.refs) != n:
            raise _Bad(f"{ln.rule.value} cites {len(ln.refs)} items, expected {n}")

    phi = ln.formula
    rule = ln.rule
    try:
        if rule is Rule.PREMISE:
            arity(0)
            if ln.depth != 0:
                return "premise inside a subproof"
            if phi not in theory:
                return f"{render(phi)} is not a member of the theory"
        elif rule is Rule.ASSUMPTION:
            arity(0)
        elif rule is Rule.REITERATION:
            arity(1)
            _need(line_ref(ln.refs[0]) == phi, "reiterated formula differs")
        elif rule is Rule.AND_I:
            arity(2)
            a, b = line_ref(ln.refs[0]), line_ref(ln.refs[1])
            _need(phi == Binary(Connective.AND, a, b), "not the conjunction of the cited lines")
        elif rule in (Rule.AND_E_LEFT, Rule.AND_E_RIGHT):
            arity(1)
            c = line_ref(ln.refs[0])
            _need(_is(c, Connective.AND), "cited line is not a conjunction")
            part = c.left if rule is Rule.AND_E_LEFT else c.right
            _need(part == phi, "formula is not the selected conjunct")
        elif rule in (Rule.OR_I_LEFT, Rule.OR_I_RIGHT):
            arity(1)
            a = line_ref(ln.refs[0])
            _need(_is(phi, Connective.OR), "formula is not a disjunction")
            part = phi.left if rule is Rule.OR_I_LEFT else phi.right
            _need(part == a, "cited line is not the selected disjunct")
        elif rule is Rule.OR_E:
            arity(3)
            d = line_ref(ln.refs[0])
            _need(_is(d, Connective.OR), "first citation is not a disjunction")
            a1, c1 = sub_ref(ln.refs[1])
            a2, c2 = sub_ref(ln.refs[2])
            _need(a1 == d.left and a2 == d.right, "subproofs do not assume the disjuncts")
            _need(c1 == phi and c2 == phi, "subproofs do not both conclude the formula")
        elif rule is Rule.IMP_I:
            arity(1)
            a, c = sub_ref(ln.refs[0])
            _need(phi == Binary(Connective.IMPLIES, a, c), "not the implication of the subproof")
        elif rule is Rule.IMP_E:
            arity(2)
            x, y = line_ref(ln.refs[0]), line_ref(ln.refs[1])
            ok = y == Binary(Connective.IMPLIES, x, phi) or x == Binary(Connective.IMPLIES, y, phi)
            _need(ok, "modus ponens does not apply")
        elif rule is Rule.IFF_I:
            arity(2)
            a1, c1 = sub_ref(ln.refs[0])
            a2, c2 = sub_ref(ln.refs[1])
            _need(a2 == c1 and c2 == a1, "subproofs are not converse")
            _need(phi == Binary(Connective.IFF, a1, c1), "not the biconditional of the subproofs")
        elif rule in (Rule.IFF_E_LEFT, Rule.IFF_E_RIGHT):
            arity(2)
            b, x = line_ref(ln.refs[0]), line_ref(ln.refs[1])
            _need(_is(b, Connective.IFF), "first citation is not a biconditional")
            if rule is Rule.IFF_E_LEFT:
                _need(x == b.left and phi == b.right, "left elimination does not apply")
            else:
                _need(x == b.right and phi == b.left, "right elimination does not apply")
        elif rule is Rule.NOT_I:
            arity(1)
            a, c = sub_ref(ln.refs[0])
            _need(isinstance(c, Falsum), "subproof does not end in absurdity")
            _need(phi == Not(a), "not the negation of the assumption")
        elif rule is Rule.NOT_E:
            arity(2)
            x, y = line_ref(ln.refs[0]), line_ref(ln.refs[1])
            _need(phi == FALSUM, "negation elimination concludes absurdity")
            _need(y == Not(x) or x == Not(y), "cited lines are not contradictory")
        elif rule is Rule.FALSUM_E:
            arity(1)
            _need(isinstance(line_ref(ln.refs[0]), Falsum), "cited line is not absurdity")
        elif rule is Rule.DNE:
            arity(1)
            _need(line_ref(ln.refs[0]) == Not(Not(phi)), "cited line is not a double negation")
        else:  # pragma: no cover
            return f"unknown rule {rule}"
    except _Bad as exc:
        return str(exc)
    return None


class _Bad(Exception):
    pass


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise _Bad(message)


def _is(f: Formula, op: Connective) -> bool:
    return isinstance(f, Binary) and f.op is op


# --------------------------------------------------------------------------
# Outcomes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProverBudget:
    max_lines: int = 14
    max_depth: int | None = None  # intermediate formula depth cap; None = inputs + 2
    max_states: int = 200_000
    time_limit: float | None = None  # seconds; None keeps runs deterministic

    def __post_init__(self):
        if self.max_lines < 1 or self.max_states < 1:
            raise ValueError("budget limits must be positive")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


class Status(Enum):
    PROVED = "proved"
    NOT_ENTAILED = "not-entailed"
    BUDGET_EXHAUSTED = "budget"


@dataclass
class ProverOutcome:
    status: Status
    proof: object | None = None  # Proof, or a Refutation from the resolution engine
    length: int | None = None
    minimal: bool = False
    states: int = 0
    diagnostics: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED

    @classmethod
    def not_entailed(cls) -> "ProverOutcome":
        return cls(Status.NOT_ENTAILED)


def delta(d_base: int, d_aug: int):
    """Speed-up 1 - d_aug / d_base as an exact fraction."""
    from fractions import Fraction

    if d_base < 1:
        raise ValueError("proof lengths are positive")
    return 1 - Fraction(d_aug, d_base)


def premise_first(lines: Sequence[Line]) -> tuple[Line, ...]:
    """Move premise lines to the front, renumbering every citation."""
    order = [i for i, ln in enumerate(lines) if ln.rule is Rule.PREMISE]
    order += [i for i, ln in enumerate(lines) if ln.rule is not Rule.PREMISE]
    new_no = {old + 1: new + 1 for new, old in enumerate(order)}

    def remap(r: Ref) -> Ref:
        if isinstance(r, tuple):
            return (new_no[r[0]], new_no[r[1]])
        return new_no[r]

    return tuple(
        Line(lines[i].formula, lines[i].rule, tuple(remap(r) for r in lines[i].refs), lines[i].depth)
        for i in order
    )
