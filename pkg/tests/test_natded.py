import random

import pytest

from propspeedup.enumeration import GenerationParams, count, formula_at
from propspeedup.formula import Var, parse, parse_many
from propspeedup.provers import DeductionMode, ProverBudget, Status, check_proof, min_proof_bfs
from propspeedup.provers.natded import default_depth_cap, universe

import oracles

# Hand-derived minimal Fitch lengths (premises count as lines).
KNOWN = [
    ("p1", "p1", 1),
    ("p1, p1 -> p2", "p2", 3),
    ("p1 & p2", "p1", 2),
    ("", "p1 -> p1", 2),
    ("p1", "p1 | p2", 2),
    ("p1, p2", "p1 & p2", 3),
    ("p1, ~p1", "p2", 4),
    ("~~p1", "p1", 2),
    ("p1 <-> p2, p2", "p1", 3),
    ("p1 -> p2, p2 -> p3", "p1 -> p3", 6),
    ("p1 | p2, ~p1", "p2", 7),
]


@pytest.mark.parametrize("theory,goal,d", KNOWN)
def test_known_minimal_lengths(theory, goal, d):
    t, g = parse_many(theory), parse(goal)
    out = min_proof_bfs(t, g)
    assert out.status is Status.PROVED
    assert out.length == d == len(out.proof)
    assert out.minimal
    assert check_proof(out.proof, t, g)


@pytest.mark.parametrize("theory,goal,d", [k for k in KNOWN if k[2] == 3])
def test_no_shorter_proof_by_exhaustion(theory, goal, d):
    t, g = parse_many(theory), parse(goal)
    pool = universe(t, g, default_depth_cap(t, g))
    assert oracles.proof_of_length_at_most_two(t, g, pool) is None


@pytest.mark.parametrize("theory,goal,d", [k for k in KNOWN if k[2] <= 2])
def test_exhaustion_finds_short_proofs(theory, goal, d):
    t, g = parse_many(theory), parse(goal)
    pool = universe(t, g, default_depth_cap(t, g))
    assert oracles.proof_of_length_at_most_two(t, g, pool) == d


def test_not_entailed():
    out = min_proof_bfs([Var(1)], Var(2))
    assert out.status is Status.NOT_ENTAILED and out.proof is None


def test_intuitionistic_mode_avoids_dne():
    out = min_proof_bfs(parse_many("~~p1"), Var(1), DeductionMode.INTUITIONISTIC, ProverBudget(max_lines=5))
    assert out.status is Status.BUDGET_EXHAUSTED
    out = min_proof_bfs(parse_many("p1"), parse("~~p1"), DeductionMode.INTUITIONISTIC)
    assert out.proved and out.length == 4


def test_budget_exhaustion_is_reported():
    out = min_proof_bfs(parse_many("p1 | p2, ~p1"), Var(2), budget=ProverBudget(max_states=1))
    assert out.status is Status.BUDGET_EXHAUSTED


def test_agrees_with_truth_tables_on_random_cases():
    params = GenerationParams(1, 2)
    f = count(params)
    rng = random.Random(7)
    budget = ProverBudget(max_states=20_000)
    for _ in range(40):
        t = [formula_at(rng.randint(1, f), params) for _ in range(2)]
        g = formula_at(rng.randint(1, f), params)
        out = min_proof_bfs(t, g, budget=budget)
        if out.status is Status.PROVED:
            assert check_proof(out.proof, t, g)
            assert oracles.entails(t, g, 2)
        elif out.status is Status.NOT_ENTAILED:
            assert not oracles.entails(t, g, 2)


def test_adding_the_goal_never_lengthens_the_proof():
    t = parse_many("p1 -> p2, p2 -> p3")
    base = min_proof_bfs(t, parse("p1 -> p3"))
    aug = min_proof_bfs(t + [parse("p1 -> p3")], parse("p1 -> p3"))
    assert aug.length == 1 < base.length


def test_intuitionistic_proofs_are_classical():
    budget = ProverBudget(max_states=20_000)
    compared = 0
    for t_text, g_text, _ in KNOWN:
        t, g = parse_many(t_text), parse(g_text)
        i = min_proof_bfs(t, g, DeductionMode.INTUITIONISTIC, budget)
        if not i.proved:
            continue
        c = min_proof_bfs(t, g, DeductionMode.CLASSICAL, budget)
        assert check_proof(i.proof, t, g, DeductionMode.CLASSICAL)
        if i.minimal and c.minimal:
            assert c.length <= i.length
            compared += 1
    assert compared >= 8


def test_state_counts_grow_along_a_modus_ponens_ladder():
    states = []
    for k in range(1, 5):
        t = [Var(1)] + [parse(f"p{i} -> p{i + 1}") for i in range(1, k + 1)]
        out = min_proof_bfs(t, Var(k + 1), budget=ProverBudget(max_lines=2 * k + 2))
        assert out.length == 2 * k + 1
        states.append(out.states)
    assert states == sorted(states) and states[-1] > states[0]
