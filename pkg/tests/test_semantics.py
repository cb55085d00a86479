from propspeedup.enumeration import GenerationParams, enumerate_formulas
from propspeedup.formula import FALSUM, Implies, Not, Or, Var, parse
from propspeedup.semantics import entails, evaluate, is_satisfiable, is_tautology, truth_table

import oracles


def test_truth_tables_match_reference_evaluator():
    m = 2
    for f in enumerate_formulas(GenerationParams(2, m)):
        bits = truth_table(f, m)
        for row, val in enumerate(oracles.valuations(m)):
            # reference rows enumerate p1 as the most significant bit
            r = sum(1 << (i - 1) for i, v in val.items() if v)
            assert (bits >> r & 1) == oracles.evaluate(f, val)
            assert evaluate(f, val) == oracles.evaluate(f, val)


def test_entailment_samples():
    p1, p2 = Var(1), Var(2)
    assert entails([p1, Implies(p1, p2)], p2)
    assert not entails([Implies(p1, p2)], p2)
    assert entails([p1, Not(p1)], p2)
    assert entails([], Or(p1, Not(p1)))
    assert is_tautology(parse("((p1 -> p2) -> p1) -> p1"))
    assert not is_satisfiable([p1, Not(p1)])
    assert truth_table(FALSUM, 2) == 0


def test_entails_agrees_with_reference():
    fs = list(enumerate_formulas(GenerationParams(1, 2)))
    for a in fs[::7]:
        for g in fs[::5]:
            assert entails([a], g, 2) == oracles.entails([a], g, 2)
