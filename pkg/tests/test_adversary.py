from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest

from conftest import small_objective
from robust_tracking.adversary import (
    attack_runtime_budget,
    bounded_rational_attack,
    enumerate_attacks,
    enumeration_size,
    isolating_edges,
    worst_case_attack,
)
from robust_tracking.errors import BudgetExceeded, ScaleExceeded
from robust_tracking.objective import AttackRealization, connected_components


def worst_reference(obj, assignment, a_s, a_c):
    """Nested loops over sensing sets and edge sets, scoring with the scalar objective."""
    edges = list(itertools.combinations(range(obj.n), 2))
    best = None
    for sensing in itertools.combinations(range(obj.n), a_s):
        for blocked in itertools.combinations(edges, a_c):
            v = max(
                obj.phi(assignment, set(c) - set(sensing))
                for c in connected_components(obj.n, blocked)
            )
            best = v if best is None else min(best, v)
    return best


def test_enumeration_counts():
    attacks = list(enumerate_attacks(4, 1, 3))
    assert len(attacks) == attack_runtime_budget(4, 1, 3) == 4 * comb(6, 3)
    assert len(set(attacks)) == len(attacks)
    assert all(len(a.sensing) == 1 and len(a.edges) == 3 for a in attacks)
    assert len(list(enumerate_attacks(4, 1, 2, exact=False))) == enumeration_size(4, 1, 2, exact=False)
    assert enumeration_size(4, 1, 2, exact=False) == 5 * (1 + 6 + 15)


def test_budget_errors():
    with pytest.raises(BudgetExceeded):
        list(enumerate_attacks(3, 4, 0))
    with pytest.raises(BudgetExceeded):
        list(enumerate_attacks(3, 0, 4))


@pytest.mark.parametrize("budget", [(0, 0), (1, 0), (0, 2), (1, 3), (2, 4), (4, 6)])
def test_worst_case_matches_nested_loops(budget):
    for seed in range(5):
        obj = small_objective(seed)
        a = (seed % 4, 1, 2, 3)
        atk, value = worst_case_attack(obj, a, *budget)
        assert value == worst_reference(obj, a, *budget)
        assert obj.team(a, atk) == value
        assert len(atk.sensing) == budget[0] and len(atk.edges) == budget[1]


def test_worst_case_is_below_random_attacks():
    edges = list(itertools.combinations(range(4), 2))
    rng = np.random.default_rng(5)
    for seed in range(3):
        obj = small_objective(100 + seed)
        a = (0, 1, 2, 3)
        _, worst = worst_case_attack(obj, a, 1, 3)
        for _ in range(1000):
            s = rng.choice(4, size=rng.integers(0, 2), replace=False)
            e = [edges[k] for k in rng.choice(6, size=rng.integers(0, 4), replace=False)]
            assert worst <= obj.team(a, AttackRealization.of(s, e)) + 1e-12


def test_exact_and_at_most_enumeration_agree():
    for seed in range(10):
        obj = small_objective(seed)
        for a_s in range(5):
            for a_c in range(7):
                _, exact = worst_case_attack(obj, (1, 2, 3, 0), a_s, a_c)
                _, upto = worst_case_attack(obj, (1, 2, 3, 0), a_s, a_c, exact=False)
                assert exact == upto


def test_scale_cap():
    obj = small_objective(0)
    with pytest.raises(ScaleExceeded):
        worst_case_attack(obj, (0, 0, 0, 0), 1, 3, cap=10)


def test_tie_break_is_lexicographic():
    obj = small_objective(0)
    # full sensing attack: every realization scores zero
    atk, value = worst_case_attack(obj, (0, 0, 0, 0), 4, 2)
    assert value == 0.0
    assert atk == AttackRealization.of(range(4), [(0, 1), (0, 2)])


def test_isolating_edges():
    assert isolating_edges(4, [2]) == frozenset({(0, 2), (1, 2), (2, 3)})
    assert len(isolating_edges(5, [0, 1])) == 4 + 3


def test_bounded_rational_structure():
    obj = small_objective(11, n=6, m=3)
    a = (0, 1, 2, 3, 0, 1)
    scores = [obj.phi(a, {i}) for i in range(6)]
    order = sorted(range(6), key=lambda i: (-scores[i], i))
    atk = bounded_rational_attack(obj, a, 2, 5)
    assert atk.sensing == frozenset(order[:2])
    # caa(6, 5).alpha_cs == 1
    assert atk.edges == isolating_edges(6, order[2:3])


def test_bounded_rational_clamps_to_team_size():
    obj = small_objective(2)
    atk = bounded_rational_attack(obj, (0, 0, 0, 0), 3, 6)
    assert atk.sensing | {i for e in atk.edges for i in e} <= set(range(4))
    assert len(atk.sensing) == 3
    assert obj.team((0, 0, 0, 0), atk) >= 0.0


def test_bounded_rational_solo_best_ranking():
    obj = small_objective(4)
    atk = bounded_rational_attack(obj, (0, 0, 0, 0), 1, 0, rank_by="solo_best")
    best = [max(obj.phi([u if k == i else 0 for k in range(4)], {i}) for u in range(4)) for i in range(4)]
    assert atk.sensing == {int(np.argmax(best))}
    with pytest.raises(ValueError):
        bounded_rational_attack(obj, (0, 0, 0, 0), 1, 0, rank_by="nope")


def test_worst_case_at_most_bounded_rational():
    for seed in range(30):
        obj = small_objective(seed)
        a = (0, 1, 2, 3)
        _, worst = worst_case_attack(obj, a, 1, 3)
        assert worst <= obj.team(a, bounded_rational_attack(obj, a, 1, 3)) + 1e-12
