from __future__ import annotations

import itertools

import pytest

from robust_tracking.caa import caa, ebar
from robust_tracking.errors import BudgetExceeded
from robust_tracking.objective import connected_components


@pytest.mark.parametrize(
    "N, alpha_c, n_max, alpha_cs",
    [(5, 7, 3, 2), (4, 4, 2, 2), (10, 29, 5, 5), (5, 0, 5, 0), (5, 10, 1, 4), (1, 0, 1, 0)],
)
def test_known_values(N, alpha_c, n_max, alpha_cs):
    r = caa(N, alpha_c)
    assert (r.n_max, r.alpha_cs) == (n_max, alpha_cs)
    assert r.e_r == N * (N - 1) // 2 - alpha_c


def test_ebar_table():
    assert caa(5, 7).ebar == (0, 2, 4, 6, 10)
    # two disjoint 5-cliques
    assert ebar(10, 5) == 2 * 10


def test_budget_validation():
    with pytest.raises(BudgetExceeded):
        caa(4, 7)
    with pytest.raises(ValueError):
        caa(4, -1)
    with pytest.raises(ValueError):
        ebar(4, 5)


def _min_largest_component(N, alpha_c):
    edges = list(itertools.combinations(range(N), 2))
    return min(
        max(len(c) for c in connected_components(N, blocked))
        for blocked in itertools.combinations(edges, alpha_c)
    )


@pytest.mark.parametrize("N", range(1, 7))
def test_n_max_is_smallest_achievable_largest_component(N):
    """Brute force over every edge removal of the given size."""
    for alpha_c in range(N * (N - 1) // 2 + 1):
        assert caa(N, alpha_c).n_max == _min_largest_component(N, alpha_c)


def _even_partition_cut(N, n):
    groups = [list(range(s, min(s + n, N))) for s in range(0, N, n)]
    label = {i: g for g, members in enumerate(groups) for i in members}
    return [(i, k) for i, k in itertools.combinations(range(N), 2) if label[i] != label[k]]


@pytest.mark.parametrize("N", range(1, 11))
def test_partition_is_realizable(N):
    """Cutting an even clique partition, then padding with inner links, yields n_max exactly."""
    for alpha_c in range(N * (N - 1) // 2 + 1):
        n_max = caa(N, alpha_c).n_max
        cut = _even_partition_cut(N, n_max)
        assert len(cut) <= alpha_c
        rest = [e for e in itertools.combinations(range(N), 2) if e not in set(cut)]
        # remove inner links from the smallest groups first so the largest group survives intact
        rest.sort(key=lambda e: -e[0])
        blocked = cut + rest[: alpha_c - len(cut)]
        comps = connected_components(N, blocked)
        assert max(len(c) for c in comps) == n_max
