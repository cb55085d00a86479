"""Theories as index sets over the propositions array, and seeded sampling.

A j-element theory is stored as its sorted member indices. Its
j-representation K = [k1, ..., kj] counts the zeros before each selected
position of the characteristic bitstring, so member i sits at
``sum(K[:i+1]) + i + 1`` and the separation order gs(K) is ``sum(K)``.

Randomness comes from :class:`random.Random` (Mersenne Twister) seeded with
a string derived from the integer seed, one independent stream for theories
and one for objectives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .enumeration import GenerationParams, IndexOutOfRange, count, formula_at
from .formula import Connective, Formula
from .semantics import is_satisfiable


class SamplingError(RuntimeError):
    pass


def indices_from_jrep(k: Sequence[int], params: GenerationParams | None = None) -> list[int]:
    indices = []
    total = 0
    for i, gap in enumerate(k, start=1):
        if gap < 0:
            raise ValueError("j-representation entries must be non-negative")
        total += gap
        indices.append(total + i)
    if params is not None and indices and indices[-1] > count(params):
        raise IndexOutOfRange(f"index {indices[-1]} exceeds f(n,m)={count(params)}")
    return indices


def jrep_from_indices(indices: Sequence[int]) -> list[int]:
    k = []
    prev = 0
    for idx in indices:
        if idx <= prev:
            raise ValueError("indices must be strictly ascending and positive")
        k.append(idx - prev - 1)
        prev = idx
    return k


def gs(k: Sequence[int]) -> int:
    return sum(k)


@dataclass(frozen=True)
class Theory:
    params: GenerationParams
    members: tuple[int, ...]
    role: str = "base"
    base_id: int | None = None
    prefix_len: int = 0

    def __post_init__(self):
        members = tuple(self.members)
        if any(b <= a for a, b in zip(members, members[1:])):
            raise ValueError("members must be strictly ascending")
        if members and (members[0] < 1 or members[-1] > count(self.params)):
            raise IndexOutOfRange("theory member outside the propositions array")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_jrep(cls, k: Sequence[int], params: GenerationParams, **kw) -> "Theory":
        return cls(params, tuple(indices_from_jrep(k, params)), **kw)

    @classmethod
    def from_formulas(cls, formulas, params: GenerationParams, **kw) -> "Theory":
        from .enumeration import index_of

        return cls(params, tuple(sorted({index_of(f, params) for f in formulas})), **kw)

    @property
    def jrep(self) -> list[int]:
        return jrep_from_indices(self.members)

    @property
    def separation(self) -> int:
        return gs(self.jrep)

    def formulas(self) -> list[Formula]:
        return [formula_at(i, self.params) for i in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def union(self, extra_indices, *, role="derived", base_id=None, prefix_len=0) -> "Theory":
        return Theory(
            self.params,
            tuple(sorted(set(self.members) | set(extra_indices))),
            role=role,
            base_id=base_id,
            prefix_len=prefix_len,
        )

    def to_text(self) -> str:
        ops = ",".join(op.name for op in self.params.ops)
        k = ",".join(str(x) for x in self.jrep)
        return f"params: n={self.params.n} m={self.params.m} ops={ops}\nj-rep: {k}\n"

    @classmethod
    def from_text(cls, text: str) -> "Theory":
        fields = {}
        for line in text.strip().splitlines():
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
        kv = dict(item.split("=", 1) for item in fields["params"].split())
        params = GenerationParams(
            int(kv["n"]), int(kv["m"]), tuple(Connective[o] for o in kv["ops"].split(","))
        )
        k = [int(x) for x in fields["j-rep"].split(",") if x.strip()]
        return cls.from_jrep(k, params)


def theory_depth(theory: Theory) -> int:
    from .formula import depth

    if not theory.members:
        raise ValueError("the syntactic complexity of an empty theory is undefined")
    return max(depth(f) for f in theory.formulas())


@dataclass(frozen=True)
class SampleSpec:
    x: int
    o: int
    seed: int
    j: int

    def __post_init__(self):
        if self.x < 1 or self.o < 1 or self.j < 1:
            raise ValueError("x, o and j must be positive")


@dataclass
class SampleReport:
    seed: int
    params: GenerationParams
    theories: list[Theory] = field(default_factory=list)
    classes: list[int] = field(default_factory=list)
    rejected_theories: int = 0
    objectives: list[int] = field(default_factory=list)
    dropped_objectives: list[int] = field(default_factory=list)

    def manifest(self) -> str:
        p = self.params
        lines = [
            f"seed={self.seed}",
            f"n={p.n} m={p.m} ops={','.join(op.name for op in p.ops)}",
            f"theories={len(self.theories)} rejected={self.rejected_theories}",
        ]
        for g, t in zip(self.classes, self.theories):
            lines.append(f"theory class={g} j-rep={','.join(map(str, t.jrep))}")
        lines.append(f"objectives={','.join(map(str, self.objectives))}")
        lines.append(f"dropped={','.join(map(str, self.dropped_objectives))}")
        return "\n".join(lines) + "\n"


def random_composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform over ordered ways of writing ``total`` as ``parts`` non-negative ints."""
    # stars and bars: pick parts-1 distinct bar slots among total+parts-1
    slots = total + parts - 1
    bars: set[int] = set()
    while len(bars) < parts - 1:
        bars.add(rng.randrange(slots))
    edges = [-1, *sorted(bars), slots]
    return [b - a - 1 for a, b in zip(edges, edges[1:])]


def sample_theories(
    params: GenerationParams,
    spec: SampleSpec,
    *,
    max_attempts: int | None = None,
    report: SampleReport | None = None,
    force_class: int | None = None,
) -> list[Theory]:
    """Draw ``spec.x`` satisfiable j-element theories.

    ``force_class`` pins the gap sum g instead of drawing it uniformly.
    """
    f = count(params)
    if f < spec.j:
        raise SamplingError(f"f(n,m)={f} is smaller than j={spec.j}")
    rng = random.Random(f"theories:{spec.seed}")
    if force_class is not None and not 0 <= force_class <= f - spec.j:
        raise SamplingError(f"class {force_class} outside [0, {f - spec.j}]")
    if max_attempts is None:
        max_attempts = 1000 * spec.x
    report = report if report is not None else SampleReport(spec.seed, params)
    attempts = 0
    while len(report.theories) < spec.x:
        if attempts >= max_attempts:
            raise SamplingError(
                f"rejection budget exhausted: {len(report.theories)} accepted, "
                f"{report.rejected_theories} rejected in {attempts} attempts"
            )
        attempts += 1
        g = rng.randrange(f - spec.j + 1) if force_class is None else force_class
        k = random_composition(rng, g, spec.j)
        theory = Theory.from_jrep(k, params)
        if not is_satisfiable(theory.formulas(), params.m):
            report.rejected_theories += 1
            continue
        report.theories.append(theory)
        report.classes.append(g)
    return report.theories


def sample_objectives(
    params: GenerationParams,
    spec: SampleSpec,
    *,
    report: SampleReport | None = None,
) -> list[Formula]:
    """Draw ``spec.o`` distinct indices, then keep a jointly satisfiable list.

    Candidates are scanned in draw order and kept only if they are
    satisfiable together with everything kept so far, the first kept
    element included.
    """
    f = count(params)
    if spec.o > f:
        raise SamplingError(f"cannot draw {spec.o} distinct objectives from {f}")
    rng = random.Random(f"objectives:{spec.seed}")
    drawn: list[int] = []
    seen: set[int] = set()
    while len(drawn) < spec.o:
        i = rng.randrange(1, f + 1)
        if i not in seen:
            seen.add(i)
            drawn.append(i)
    report = report if report is not None else SampleReport(spec.seed, params)
    kept: list[Formula] = []
    for i in drawn:
        phi = formula_at(i, params)
        if is_satisfiable(kept + [phi], params.m):
            kept.append(phi)
            report.objectives.append(i)
        else:
            report.dropped_objectives.append(i)
    if not kept:
        raise SamplingError("every sampled objective was inconsistent")
    return kept
