import pytest

from propspeedup.formula import Var, parse, parse_many
from propspeedup.provers import ExactDeltaOracle, check_proof, oracle_guided_search

from corpus import flat_chain_instances


def test_modus_ponens():
    t = parse_many("p1, p1 -> p2")
    r = oracle_guided_search(t, Var(2))
    assert r.status == "proved" and r.length == 3
    assert check_proof(r.proof, t, Var(2))


def test_goal_already_axiom():
    r = oracle_guided_search([Var(1)], Var(1))
    assert r.length == 1 and r.derivations == []


def test_oracle_memoizes():
    o = ExactDeltaOracle(Var(2))
    t = parse_many("p1, p1 -> p2")
    assert o.length(t) == 3
    assert o.length(list(reversed(t))) == 3
    assert o.calls == 1
    assert o.positive(t, [Var(2)])


def test_oracle_rejects_non_entailed():
    with pytest.raises(ValueError):
        ExactDeltaOracle(Var(2)).length([Var(1)])


def test_subproof_only_goal_reports_no_candidate():
    # p1 -> p1 needs ->I, which the flat candidate set does not contain
    r = oracle_guided_search([Var(2)], parse("p1 -> p1"))
    assert r.status == "no-candidate"


def test_matches_exact_prover_on_chain_corpus():
    for t, g, exact in flat_chain_instances(101, 8):
        r = oracle_guided_search(t, g)
        assert r.status == "proved"
        assert r.length == exact.length
        assert check_proof(r.proof, t, g)
