"""Normality audits over a speed-up matrix.

A derived theory with prefix length q contains the objectives o_1..o_q, so
every cell with q >= r (row r, 1-based) is trivial. Only the cell with
q == r compares a theory without the objective against one with it; for
q > r the reference theory already holds the objective. The trivial check
therefore looks at q == r cells, and skips them as degenerate when the
reference proof is a single line (the objective was already an axiom).
A matrix without recorded lengths skips the check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_DOWN, Decimal
from fractions import Fraction

from .experiment import Incidence, SpeedupMatrix, classify


@dataclass(frozen=True)
class Witness:
    row: int
    column: int
    value: Fraction | None
    why: str


@dataclass(frozen=True)
class EpsilonEntry:
    family: int
    prefix_len: int
    size: int
    min_delta: Fraction | None
    cells: int


@dataclass
class NormalityAudit:
    provable: int
    positive: int
    negative: int
    zero: int
    undefined: int
    trivial_total: int
    trivial_positive: int
    degenerate_trivial: int
    epsilon: list[EpsilonEntry] = field(default_factory=list)
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def positive_pct(self) -> Fraction | None:
        return None if not self.provable else Fraction(100 * self.positive, self.provable)

    @property
    def negative_pct(self) -> Fraction | None:
        return None if not self.provable else Fraction(100 * self.negative, self.provable)

    @property
    def ratio(self) -> Fraction | None:
        """Positive over negative count; None when there are no negatives."""
        return None if not self.negative else Fraction(self.positive, self.negative)

    @property
    def trivial_rate(self) -> Fraction | None:
        return None if not self.trivial_total else Fraction(self.trivial_positive, self.trivial_total)

    @property
    def normal(self) -> bool:
        return not self.witnesses

    @property
    def verdict(self) -> str:
        return "possibly-normal" if self.normal else "not-normal"


def audit(matrix: SpeedupMatrix, config=None) -> NormalityAudit:
    counts = {k: 0 for k in Incidence}
    witnesses: list[Witness] = []
    trivial_total = trivial_pos = degenerate = 0
    for r, row in enumerate(matrix.cells):
        for c, cell in enumerate(row):
            counts[classify(cell)] += 1
            if cell.value is not None and cell.value < 0:
                witnesses.append(Witness(r, c, cell.value, "negative speed-up"))
            q = matrix.columns[c].prefix_len
            if q != r + 1 or cell.value is None or not matrix.lengths:
                continue
            if _reference_is_trivial(matrix, r, c, cell):
                degenerate += 1
                continue
            trivial_total += 1
            if cell.value > 0:
                trivial_pos += 1
            else:
                witnesses.append(Witness(r, c, cell.value, "objective added as axiom gave no speed-up"))
    provable = counts[Incidence.POSITIVE] + counts[Incidence.ZERO] + counts[Incidence.NEGATIVE]
    return NormalityAudit(
        provable=provable,
        positive=counts[Incidence.POSITIVE],
        negative=counts[Incidence.NEGATIVE],
        zero=counts[Incidence.ZERO],
        undefined=counts[Incidence.UNDEFINED],
        trivial_total=trivial_total,
        trivial_positive=trivial_pos,
        degenerate_trivial=degenerate,
        epsilon=epsilon_table(matrix),
        witnesses=witnesses,
    )


def _reference_is_trivial(matrix: SpeedupMatrix, r: int, c: int, cell) -> bool:
    """Whether the reference proof for this cell is a single line."""
    fam = matrix.columns[c].family
    earlier = [
        matrix.lengths[r][k]
        for k in range(c)
        if matrix.columns[k].family == fam and matrix.lengths[r][k] is not None
    ]
    return bool(earlier) and min(earlier) == 1


def epsilon_table(matrix: SpeedupMatrix) -> list[EpsilonEntry]:
    """Smallest observed delta per family and derived-theory size."""
    out = []
    for c, info in enumerate(matrix.columns):
        if info.prefix_len == 0:
            continue
        vals = [row[c].value for row in matrix.cells if row[c].value is not None]
        out.append(EpsilonEntry(info.family, info.prefix_len, info.size,
                                min(vals) if vals else None, len(vals)))
    return out


def from_counts(provable: int, positive: int, negative: int) -> NormalityAudit:
    """An audit carrying only the headline counts (e.g. a published table row)."""
    if positive + negative > provable or min(provable, positive, negative) < 0:
        raise ValueError("counts are inconsistent")
    witnesses = [Witness(-1, -1, None, "negative speed-up")] * (1 if negative else 0)
    return NormalityAudit(provable, positive, negative, provable - positive - negative, 0,
                          0, 0, 0, [], witnesses)


def truncate(value: Fraction, places: int) -> Decimal:
    q = Decimal(1).scaleb(-places)
    return (Decimal(value.numerator) / Decimal(value.denominator)).quantize(q, rounding=ROUND_DOWN)


SUMMARY_COLUMNS = ("Cases", "δ>0", "Percentage", "δ<0", "Ratio")


def summary_row(a: NormalityAudit) -> list[str]:
    pct = "0.0%" if a.positive_pct is None else f"{truncate(a.positive_pct, 1)}%"
    if a.ratio is None:
        ratio = "∞" if a.positive else "0"
    else:
        ratio = str(truncate(a.ratio, 2))
    return [str(a.provable), str(a.positive), pct, str(a.negative), ratio]


def summarize(a: NormalityAudit, label: str | None = None) -> str:
    """Table-style text: header, one row, then the verdict."""
    head = list(SUMMARY_COLUMNS)
    row = summary_row(a)
    if label is not None:
        head.insert(0, "Exp.")
        row.insert(0, label)
    widths = [max(len(h), len(v)) for h, v in zip(head, row)]
    lines = [
        " | ".join(h.rjust(w) for h, w in zip(head, widths)),
        "-+-".join("-" * w for w in widths),
        " | ".join(v.rjust(w) for v, w in zip(row, widths)),
        "",
        f"verdict: {a.verdict}",
    ]
    if a.trivial_total:
        lines.append(f"trivial detection: {a.trivial_positive}/{a.trivial_total}"
                     f" ({a.degenerate_trivial} degenerate)")
    for w in a.witnesses[:10]:
        if w.row >= 0:
            lines.append(f"  witness row {w.row} column {w.column}: {w.value} ({w.why})")
    if len(a.witnesses) > 10:
        lines.append(f"  ... {len(a.witnesses) - 10} more")
    return "\n".join(lines) + "\n"


def epsilon_text(a: NormalityAudit) -> str:
    lines = ["family prefix size cells min_delta"]
    for e in a.epsilon:
        v = "NA" if e.min_delta is None else str(e.min_delta)
        lines.append(f"{e.family} {e.prefix_len} {e.size} {e.cells} {v}")
    return "\n".join(lines) + "\n"
