from fractions import Fraction

from propspeedup.audit import audit, from_counts, summarize, summary_row, truncate
from propspeedup.experiment import Cell, ColumnInfo, SpeedupMatrix


def matrix(values, prefixes, lengths=None):
    cols = [ColumnInfo(0, q, 2 + q) for q in prefixes]
    cells = [[Cell(None, "unprovable") if v is None else Cell(Fraction(v)) for v in row] for row in values]
    return SpeedupMatrix(cols, [f"o{i}" for i in range(len(values))], cells, lengths or [])


def test_table_row():
    a = from_counts(5400, 606, 94)
    assert summary_row(a) == ["5400", "606", "11.2%", "94", "6.44"]
    # tolerances apply to the displayed figures; 606/94 = 6.4468... shows as 6.44
    pct, ratio = summary_row(a)[2], summary_row(a)[4]
    assert abs(Fraction(pct.rstrip("%")) - Fraction(112, 10)) <= Fraction(5, 100)
    assert abs(Fraction(ratio) - Fraction(644, 100)) <= Fraction(5, 1000)
    assert a.verdict == "not-normal"
    text = summarize(a, label="11")
    assert "Exp. | Cases | δ>0 | Percentage | δ<0 | Ratio" in text
    assert "11 |  5400 | 606 |      11.2% |  94 |  6.44" in text


def test_infinite_ratio_and_empty():
    assert summary_row(from_counts(10, 3, 0))[-1] == "∞"
    assert summary_row(from_counts(0, 0, 0)) == ["0", "0", "0.0%", "0", "0"]


def test_truncation():
    assert str(truncate(Fraction(606, 94), 2)) == "6.44"
    assert str(truncate(Fraction(2, 3), 1)) == "0.6"


def test_clean_matrix_is_possibly_normal():
    m = matrix([[0, "1/2"], [0, 0]], [0, 1], lengths=[[4, 2], [3, 3]])
    a = audit(m)
    assert a.verdict == "possibly-normal"
    assert (a.positive, a.zero, a.negative) == (1, 3, 0)
    assert a.trivial_total == 1 and a.trivial_positive == 1


def test_injected_negative_is_witnessed():
    m = matrix([[0, "1/2"], [0, "-1/3"]], [0, 1], lengths=[[4, 2], [3, 4]])
    a = audit(m)
    assert a.verdict == "not-normal"
    assert any(w.row == 1 and w.column == 1 and w.value == Fraction(-1, 3) for w in a.witnesses)


def test_zero_trivial_cell_fails_unless_degenerate():
    m = matrix([[0, 0]], [0, 1], lengths=[[3, 3]])
    assert audit(m).verdict == "not-normal"
    m = matrix([[0, 0]], [0, 1], lengths=[[1, 1]])
    a = audit(m)
    assert a.verdict == "possibly-normal" and a.degenerate_trivial == 1


def test_undefined_cells_are_not_provable():
    a = audit(matrix([[None, None], [0, "1/4"]], [0, 1]))
    assert a.undefined == 2 and a.provable == 2


def test_epsilon_table():
    a = audit(matrix([["0", "-1/2"], ["0", "1/3"]], [0, 1]))
    assert [(e.prefix_len, e.min_delta) for e in a.epsilon] == [(1, Fraction(-1, 2))]
