from dataclasses import replace
from fractions import Fraction

import pytest

from propspeedup.enumeration import GenerationParams
from propspeedup.experiment import (
    CaseStatus, ExperimentConfig, Incidence, build_cases, classify, family_row,
    incidence, matrix_csv, parse_ops, read_matrix_csv, read_results_csv, results_csv, run_cases,
    speedup_matrix,
)
from propspeedup.formula import Connective
from propspeedup.provers import ProverBudget

import oracles

SMALL = ExperimentConfig(GenerationParams(1, 2), j=2, x=2, o=3, seed=4)


def test_min_rule():
    row = family_row([5, 4, 6])
    assert [c.value for c in row] == [0, Fraction(1, 5), Fraction(-1, 2)]
    assert [c.reference for c in row] == [0, 0, 1]
    assert [classify(c) for c in row] == [Incidence.ZERO, Incidence.POSITIVE, Incidence.NEGATIVE]


def test_min_rule_ties_pick_earliest():
    row = family_row([4, 4, 2])
    assert row[2].reference == 0 and row[2].value == Fraction(1, 2)


def test_undefined_entries():
    row = family_row([None, 3], ["skipped-unprovable", "proved"])
    assert row[0].value is None and row[1].value is None
    assert classify(row[1]) is Incidence.UNDEFINED
    row = family_row([None, 3], ["budget", "proved"])
    assert row[1].reason == "budget"
    assert family_row([5, None, 4])[2].value == Fraction(1, 5)


def test_construction_shape():
    cfg = ExperimentConfig(GenerationParams(1, 2), j=2, x=1, o=2, derived_prefixes=2, seed=3)
    exp = build_cases(cfg)
    k = len(exp.objective_indices)
    assert len(exp.columns) == 1 + k
    assert [c.prefix_len for c in exp.columns] == list(range(k + 1))
    assert len(exp.cases) == len(exp.columns) * len(exp.objectives)


def test_skipped_cases_fail_entailment():
    exp = build_cases(SMALL)
    for case in exp.cases:
        t = exp.columns[case.column].theory.formulas()
        g = exp.objectives[case.row]
        assert (case.status is CaseStatus.SKIPPED) == (not oracles.entails(t, g, 2))


def test_trivial_cells_contain_the_objective():
    exp = build_cases(SMALL)
    for col in exp.columns:
        for r in range(len(exp.objectives)):
            if r < col.prefix_len:
                assert exp.objectives[r] in col.theory.formulas()


def test_run_is_deterministic_and_normal():
    exp = build_cases(SMALL)
    a = run_cases(exp)
    b = run_cases(build_cases(SMALL))
    assert results_csv(exp, a) == results_csv(exp, b)
    m = speedup_matrix(exp, a)
    assert all(classify(c) is not Incidence.NEGATIVE for row in m.cells for c in row)
    for row in m.cells:
        for col, cell in zip(m.columns, row):
            if col.prefix_len == 0 and cell.value is not None:
                assert cell.value == 0


def test_parallel_run_matches_serial():
    exp = build_cases(SMALL)
    serial = results_csv(exp, run_cases(exp))
    par = results_csv(exp, run_cases(exp, replace(SMALL, workers=2)))
    assert serial == par


def test_budget_cell_is_undefined():
    cfg = replace(SMALL, budget=ProverBudget(max_states=1))
    exp = build_cases(cfg)
    res = run_cases(exp)
    assert any(r.status == "budget" for r in res.values())
    m = speedup_matrix(exp, res)
    assert any(c.reason == "budget" for row in m.cells for c in row)


def test_single_axiom_cell_has_length_one():
    exp = build_cases(SMALL)
    res = run_cases(exp)
    for (c, r), out in res.items():
        if exp.objectives[r] in exp.columns[c].theory.formulas():
            assert out.length == 1


def test_results_csv_roundtrip():
    exp = build_cases(SMALL)
    res = run_cases(exp)
    back = read_results_csv(results_csv(exp, res))
    assert {k: (v.status, v.length) for k, v in back.items()} == {k: (v.status, v.length) for k, v in res.items()}
    assert "millis" in results_csv(exp, res).splitlines()[0]


def test_matrix_csv_roundtrip_keeps_classes():
    exp = build_cases(SMALL)
    m = speedup_matrix(exp, run_cases(exp))
    text = matrix_csv(m)
    back = read_matrix_csv(text)
    assert incidence(back) == incidence(m)
    assert back.lengths == m.lengths
    assert matrix_csv(back) == text


def test_parse_ops():
    assert parse_ops("iff, and") == (Connective.IFF, Connective.AND)
    assert len(parse_ops("")) == 4
    with pytest.raises(KeyError):
        parse_ops("xor")


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(engine="prover9")
    with pytest.raises(ValueError):
        ExperimentConfig(o=2, derived_prefixes=3)
