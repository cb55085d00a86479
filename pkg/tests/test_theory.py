import random

import pytest
from hypothesis import given, strategies as st

from propspeedup.enumeration import GenerationParams, count, formula_at, index_of
from propspeedup.formula import parse
from propspeedup.semantics import is_satisfiable
from propspeedup.theory import (
    SampleReport, SampleSpec, SamplingError, Theory, gs, indices_from_jrep, jrep_from_indices,
    random_composition, sample_objectives, sample_theories, theory_depth,
)

P12 = GenerationParams(1, 2)


def test_jrep_examples():
    assert indices_from_jrep([0, 0, 0]) == [1, 2, 3]
    assert indices_from_jrep([2, 0, 1]) == [3, 4, 6]
    assert gs([0, 0, 0]) == 0
    assert gs([2, 0, 1]) == 3
    assert gs([7, 0, 0, 0]) == 7


@given(st.lists(st.integers(0, 40), min_size=1, max_size=6))
def test_jrep_roundtrip(k):
    assert jrep_from_indices(indices_from_jrep(k)) == k


def test_jrep_matches_bitstring_reading():
    # bitstring 001101: zeros before each one are 2, 0, 1
    bits = "001101"
    ones = [i + 1 for i, b in enumerate(bits) if b == "1"]
    assert ones == indices_from_jrep([2, 0, 1])


def test_theory_depth():
    p22 = GenerationParams(2, 2)
    assert theory_depth(Theory.from_formulas([parse("p1"), parse("p2")], p22)) == 0
    # ~p1 & p2 is built at level 1 from the operand pool {p1, p2, ~p1, ~p2}
    t = Theory.from_formulas([parse("p1"), parse("~p1 & p2")], p22)
    assert theory_depth(t) == 1
    t = Theory.from_formulas([parse("~(p1 & ~p2)")], p22)
    assert theory_depth(t) == 2
    with pytest.raises(ValueError):
        theory_depth(Theory(p22, ()))


def test_text_roundtrip():
    t = Theory(P12, (3, 9, 40))
    assert Theory.from_text(t.to_text()) == t
    assert t.jrep == [2, 5, 30]
    assert t.formulas() == [formula_at(i, P12) for i in (3, 9, 40)]


def test_union_keeps_sorted_members():
    t = Theory(P12, (3, 9)).union([5, 9], prefix_len=1)
    assert t.members == (3, 5, 9) and t.role == "derived"


def test_random_composition_is_uniform_and_exact():
    rng = random.Random(0)
    seen = {}
    for _ in range(6000):
        k = tuple(random_composition(rng, 3, 2))
        assert sum(k) == 3 and min(k) >= 0
        seen[k] = seen.get(k, 0) + 1
    assert set(seen) == {(0, 3), (1, 2), (2, 1), (3, 0)}
    assert all(1200 < c < 1800 for c in seen.values())


def test_forced_class_zero_gives_first_formulas():
    t = sample_theories(P12, SampleSpec(1, 1, seed=5, j=2), force_class=0)
    assert t[0].members == (1, 2)
    # {p1, p2, ~p1} is the only class-0 theory with j=3, and it is inconsistent
    with pytest.raises(SamplingError):
        sample_theories(P12, SampleSpec(1, 1, seed=5, j=3), force_class=0, max_attempts=50)


def test_forced_class_out_of_range():
    with pytest.raises(SamplingError):
        sample_theories(P12, SampleSpec(1, 1, 0, 2), force_class=count(P12))


def test_sampled_theories_are_satisfiable_and_deterministic():
    spec = SampleSpec(20, 3, seed=11, j=3)
    a = sample_theories(P12, spec)
    b = sample_theories(P12, spec)
    assert a == b
    assert all(is_satisfiable(t.formulas(), 2) for t in a)
    c = sample_theories(P12, SampleSpec(20, 3, seed=12, j=3))
    assert a != c


def test_rejections_are_reported():
    rep = SampleReport(0, P12)
    sample_theories(P12, SampleSpec(30, 1, 3, 4), report=rep)
    assert len(rep.theories) == 30 and len(rep.classes) == 30
    assert "rejected=" in rep.manifest()


def test_objectives_jointly_satisfiable():
    for seed in range(10):
        rep = SampleReport(seed, P12)
        objs = sample_objectives(P12, SampleSpec(1, 6, seed, 1), report=rep)
        assert is_satisfiable(objs, 2)
        assert [index_of(o, P12) for o in objs] == rep.objectives
        assert len(objs) + len(rep.dropped_objectives) == 6
    assert sample_objectives(P12, SampleSpec(1, 4, 3, 1)) == sample_objectives(P12, SampleSpec(1, 4, 3, 1))


def test_single_objective():
    objs = sample_objectives(P12, SampleSpec(1, 1, 8, 1))
    assert len(objs) == 1 and is_satisfiable(objs, 2)


def test_too_many_objectives():
    with pytest.raises(SamplingError):
        sample_objectives(GenerationParams(0, 2), SampleSpec(1, 3, 0, 1))
