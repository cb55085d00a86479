"""TPTP FOF export of propositional cases, and a reader for our own output."""

from __future__ import annotations

import re

from .formula import Binary, Connective, Falsum, Formula, Not, Var, parse

_OPS = {
    Connective.IFF: "<=>",
    Connective.IMPLIES: "=>",
    Connective.AND: "&",
    Connective.OR: "|",
}


def tptp_formula(f: Formula) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Falsum):
        return "$false"
    if isinstance(f, Not):
        return f"~ {tptp_formula(f.child)}"
    assert isinstance(f, Binary)
    return f"({tptp_formula(f.left)} {_OPS[f.op]} {tptp_formula(f.right)})"


def export_tptp(theory, goal: Formula, name: str = "case") -> str:
    if hasattr(theory, "formulas") and callable(theory.formulas):
        theory = theory.formulas()
    lines = [f"% {name}: {len(theory)} axioms, propositional"]
    for k, f in enumerate(theory, 1):
        lines.append(f"fof(ax_{k}, axiom, {tptp_formula(f)}).")
    lines.append(f"fof(goal, conjecture, {tptp_formula(goal)}).")
    return "\n".join(lines) + "\n"


_FOF = re.compile(r"^fof\(\s*([a-z][A-Za-z0-9_]*)\s*,\s*([a-z_]+)\s*,\s*(.*)\)\.\s*$")


def read_tptp(text: str) -> tuple[list[Formula], Formula | None]:
    axioms: list[Formula] = []
    goal = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        m = _FOF.match(line)
        if m is None:
            raise ValueError(f"unsupported TPTP line: {line!r}")
        role, body = m.group(2), m.group(3)
        f = parse(body)
        if role == "conjecture":
            goal = f
        elif role in ("axiom", "hypothesis"):
            axioms.append(f)
        else:
            raise ValueError(f"unsupported role {role!r}")
    return axioms, goal
