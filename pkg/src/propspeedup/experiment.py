"""Speed-up experiments: theory families, case grid, prover runs, matrices.

Columns are grouped by family: base theory first, then the derived theories
base + O_1, base + O_2, ... in prefix order. Rows are the objectives in
sampled order.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

from .enumeration import GenerationParams
from .formula import BINARY_CONNECTIVES, Connective, Formula, render
from .provers.natded import min_proof_bfs
from .provers.proof import DeductionMode, ProverBudget, Status, delta
from .provers.resolution import resolution_prove
from .semantics import entails
from .theory import SampleReport, SampleSpec, Theory, sample_objectives, sample_theories

ENGINES = ("exact", "resolution")


@dataclass(frozen=True)
class ExperimentConfig:
    params: GenerationParams = GenerationParams(1, 2)
    j: int = 2
    x: int = 3
    o: int = 4
    derived_prefixes: int | None = None  # None means o
    mode: DeductionMode = DeductionMode.CLASSICAL
    engine: str = "exact"
    budget: ProverBudget = ProverBudget()
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for name in ("j", "x", "o", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.derived_prefixes is not None and not 0 <= self.derived_prefixes <= self.o:
            raise ValueError("derived_prefixes must lie in [0, o]")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {', '.join(ENGINES)}")

    @property
    def prefixes(self) -> int:
        return self.o if self.derived_prefixes is None else self.derived_prefixes

    def header(self) -> list[tuple[str, str]]:
        p = self.params
        return [
            ("n", str(p.n)),
            ("m", str(p.m)),
            ("ops", ",".join(op.name for op in p.ops)),
            ("j", str(self.j)),
            ("x", str(self.x)),
            ("o", str(self.o)),
            ("derived_prefixes", str(self.prefixes)),
            ("mode", self.mode.value),
            ("engine", self.engine),
            ("seed", str(self.seed)),
        ]


@dataclass(frozen=True)
class Column:
    index: int
    family: int
    prefix_len: int
    theory: Theory

    @property
    def is_base(self) -> bool:
        return self.prefix_len == 0


@dataclass(frozen=True)
class TheoryFamily:
    base: Theory
    derived: tuple[Theory, ...]

    def members(self) -> tuple[Theory, ...]:
        return (self.base, *self.derived)


class CaseStatus(Enum):
    PENDING = "pending"
    SKIPPED = "skipped-unprovable"


@dataclass(frozen=True)
class Case:
    column: int
    row: int
    status: CaseStatus


@dataclass
class Experiment:
    config: ExperimentConfig
    families: list[TheoryFamily]
    columns: list[Column]
    objectives: list[Formula]
    objective_indices: list[int]
    cases: list[Case]
    report: SampleReport

    def case(self, column: int, row: int) -> Case:
        return self.cases[row * len(self.columns) + column]


def build_cases(config: ExperimentConfig) -> Experiment:
    params = config.params
    spec = SampleSpec(config.x, config.o, config.seed, config.j)
    report = SampleReport(config.seed, params)
    sample_theories(params, spec, report=report)
    objectives = sample_objectives(params, spec, report=report)
    kept = list(report.objectives)
    prefixes = min(config.prefixes, len(kept))
    families, columns = [], []
    for b, base in enumerate(report.theories):
        base = Theory(params, base.members, role="base", base_id=b)
        derived = tuple(
            base.union(kept[:q], role="derived", base_id=b, prefix_len=q)
            for q in range(1, prefixes + 1)
        )
        fam = TheoryFamily(base, derived)
        families.append(fam)
        for q, t in enumerate(fam.members()):
            columns.append(Column(len(columns), b, q, t))
    cases = []
    for r, goal in enumerate(objectives):
        for col in columns:
            ok = entails(col.theory.formulas(), goal, params.m)
            cases.append(Case(col.index, r, CaseStatus.PENDING if ok else CaseStatus.SKIPPED))
    return Experiment(config, families, columns, objectives, kept, cases, report)


# --------------------------------------------------------------------------
# Running
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseResult:
    column: int
    row: int
    status: str  # "proved", "skipped-unprovable", "budget", "not-entailed"
    length: int | None = None
    states: int = 0
    minimal: bool = False
    millis: int | None = None


def prove_case(formulas, goal, engine: str, mode: DeductionMode, budget: ProverBudget):
    if engine == "exact":
        return min_proof_bfs(formulas, goal, mode, budget)
    return resolution_prove(formulas, goal, budget)


def _job(args):
    formulas, goal, engine, mode, budget = args
    t0 = time.perf_counter()
    out = prove_case(formulas, goal, engine, mode, budget)
    millis = int((time.perf_counter() - t0) * 1000)
    return out.status.value, out.length, out.states, out.minimal, millis


def run_cases(
    exp: Experiment,
    config: ExperimentConfig | None = None,
    *,
    timing: bool = False,
    progress=None,
) -> dict[tuple[int, int], CaseResult]:
    """Prove every pending case; results are keyed by (column, row).

    Identical (theory, objective) pairs are proved once. With ``timing``
    off the millis field stays empty so reruns are byte-identical.
    """
    config = config or exp.config
    jobs: dict[tuple, tuple] = {}
    keys: dict[tuple[int, int], tuple] = {}
    for case in exp.cases:
        if case.status is CaseStatus.SKIPPED:
            continue
        theory = exp.columns[case.column].theory
        goal = exp.objectives[case.row]
        key = (theory.members, goal)
        keys[(case.column, case.row)] = key
        if key not in jobs:
            jobs[key] = (theory.formulas(), goal, config.engine, config.mode, config.budget)
    order = list(jobs)
    if config.workers > 1 and len(order) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outs = list(pool.map(_job, [jobs[k] for k in order], chunksize=1))
    else:
        outs = []
        for n, k in enumerate(order):
            outs.append(_job(jobs[k]))
            if progress is not None:
                progress(n + 1, len(order))
    done = dict(zip(order, outs))
    results = {}
    for case in exp.cases:
        cr = (case.column, case.row)
        if case.status is CaseStatus.SKIPPED:
            results[cr] = CaseResult(case.column, case.row, CaseStatus.SKIPPED.value)
            continue
        status, length, states, minimal, millis = done[keys[cr]]
        results[cr] = CaseResult(
            case.column, case.row, status, length, states, minimal, millis if timing else None
        )
    return results


RESULT_FIELDS = ("family", "column", "row", "prefix_len", "status", "D", "states", "millis", "seed")


def results_csv(exp: Experiment, results: Mapping[tuple[int, int], CaseResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_FIELDS)
    for key in sorted(results):
        r = results[key]
        col = exp.columns[r.column]
        w.writerow([
            col.family, r.column, r.row, col.prefix_len, r.status,
            "" if r.length is None else r.length, r.states,
            "" if r.millis is None else r.millis, exp.config.seed,
        ])
    return buf.getvalue()


def read_results_csv(text: str) -> dict[tuple[int, int], CaseResult]:
    out = {}
    for row in csv.DictReader(io.StringIO(text)):
        c, r = int(row["column"]), int(row["row"])
        out[(c, r)] = CaseResult(
            c, r, row["status"],
            int(row["D"]) if row["D"] else None,
            int(row["states"]),
            False,
            int(row["millis"]) if row["millis"] else None,
        )
    return out


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


class Incidence(Enum):
    POSITIVE = "+"
    ZERO = "0"
    NEGATIVE = "-"
    UNDEFINED = "U"


@dataclass(frozen=True)
class Cell:
    value: Fraction | None
    reason: str | None = None  # "unprovable" or "budget" when value is None
    reference: int | None = None  # column index of t(i, j)

    @property
    def defined(self) -> bool:
        return self.value is not None

    def text(self) -> str:
        return f"NA:{self.reason}" if self.value is None else str(self.value)

    @classmethod
    def parse(cls, text: str) -> "Cell":
        if text.startswith("NA:"):
            return cls(None, text[3:])
        return cls(Fraction(text))


@dataclass(frozen=True)
class ColumnInfo:
    family: int
    prefix_len: int
    size: int  # number of axioms in the column's theory


@dataclass
class SpeedupMatrix:
    columns: list[ColumnInfo]
    objectives: list[str]
    cells: list[list[Cell]]  # cells[row][column]
    lengths: list[list[int | None]] = field(default_factory=list)
    header: list[tuple[str, str]] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.objectives), len(self.columns)

    def cell(self, row: int, column: int) -> Cell:
        return self.cells[row][column]


def _undefined_reason(status: str | None) -> str:
    return "budget" if status == "budget" else "unprovable"


def family_row(lengths: Sequence[int | None], statuses: Sequence[str] | None = None) -> list[Cell]:
    """Speed-up cells for one objective across one family (base first).

    The reference for derived member i is the earlier member with the
    smallest recorded D, the earliest one on ties.
    """
    statuses = statuses or ["proved" if d is not None else "unprovable" for d in lengths]
    out = []
    for i, d in enumerate(lengths):
        if d is None:
            out.append(Cell(None, _undefined_reason(statuses[i])))
            continue
        if i == 0:
            out.append(Cell(Fraction(0), reference=0))
            continue
        earlier = [(lengths[k], k) for k in range(i) if lengths[k] is not None]
        if not earlier:
            bad = [statuses[k] for k in range(i)]
            out.append(Cell(None, "budget" if "budget" in bad else "unprovable"))
            continue
        ref_d, ref = min(earlier)
        out.append(Cell(delta(ref_d, d), reference=ref))
    return out


def speedup_matrix(exp: Experiment, results: Mapping[tuple[int, int], CaseResult]) -> SpeedupMatrix:
    cols = [ColumnInfo(c.family, c.prefix_len, len(c.theory)) for c in exp.columns]
    cells, lengths = [], []
    for r in range(len(exp.objectives)):
        row_cells: list[Cell] = []
        row_len: list[int | None] = []
        for fam_id in range(len(exp.families)):
            members = [c for c in exp.columns if c.family == fam_id]
            res = [results[(c.index, r)] for c in members]
            ds = [x.length if x.status == Status.PROVED.value else None for x in res]
            fam_cells = family_row(ds, [x.status for x in res])
            offset = members[0].index
            for cell in fam_cells:
                if cell.reference is not None:
                    cell = Cell(cell.value, cell.reason, cell.reference + offset)
                row_cells.append(cell)
            row_len.extend(ds)
        cells.append(row_cells)
        lengths.append(row_len)
    return SpeedupMatrix(
        cols, [render(f) for f in exp.objectives], cells, lengths, exp.config.header()
    )


def classify(cell: Cell) -> Incidence:
    if cell.value is None:
        return Incidence.UNDEFINED
    if cell.value > 0:
        return Incidence.POSITIVE
    if cell.value < 0:
        return Incidence.NEGATIVE
    return Incidence.ZERO


def incidence(matrix: SpeedupMatrix) -> list[list[Incidence]]:
    return [[classify(c) for c in row] for row in matrix.cells]


def matrix_csv(matrix: SpeedupMatrix) -> str:
    buf = io.StringIO()
    for k, v in matrix.header:
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", ""] + [c.family for c in matrix.columns])
    w.writerow(["prefix_len", ""] + [c.prefix_len for c in matrix.columns])
    w.writerow(["size", ""] + [c.size for c in matrix.columns])
    for r, name in enumerate(matrix.objectives):
        w.writerow([r, name] + [c.text() for c in matrix.cells[r]])
    if matrix.lengths:
        w.writerow(["D", ""] + [""] * len(matrix.columns))
        for r, name in enumerate(matrix.objectives):
            w.writerow([r, name] + ["" if d is None else d for d in matrix.lengths[r]])
    return buf.getvalue()


def read_matrix_csv(text: str) -> SpeedupMatrix:
    header = []
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            header.append((k, v))
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if len(rows) < 3:
        raise ValueError("matrix CSV needs family, prefix_len and size rows")
    fam, pre, size = rows[0][2:], rows[1][2:], rows[2][2:]
    cols = [ColumnInfo(int(a), int(b), int(c)) for a, b, c in zip(fam, pre, size)]
    names, cells, lengths = [], [], []
    grid = rows[3:]
    split = next((k for k, row in enumerate(grid) if row[0] == "D"), len(grid))
    for row in grid[:split]:
        names.append(row[1])
        cells.append([Cell.parse(x) for x in row[2:]])
    for row in grid[split + 1:]:
        lengths.append([int(x) if x else None for x in row[2:]])
    return SpeedupMatrix(cols, names, cells, lengths, header)


def parse_ops(text: str) -> tuple[Connective, ...]:
    if not text.strip():
        return BINARY_CONNECTIVES
    return tuple(Connective[t.strip().upper()] for t in text.split(",") if t.strip())
