"""Attack oracles: exhaustive worst case and the bounded rational heuristic."""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .caa import caa
from .errors import BudgetExceeded, ScaleExceeded
from .objective import (
    Assignment,
    AttackRealization,
    TrackingObjective,
    as_objective,
    connected_components,
    mask_of,
)
from .scenario import Scenario

DEFAULT_CAP = 10**8


def attack_runtime_budget(N: int, alpha_s: int, alpha_c: int) -> int:
    """Number of exact-size (sensing, link) attack realizations."""
    return comb(N, alpha_s) * comb(N * (N - 1) // 2, alpha_c)


def check_budgets(N: int, alpha_s: int, alpha_c: int) -> None:
    if not 0 <= alpha_s <= N:
        raise BudgetExceeded(f"alpha_s={alpha_s} must lie in [0, {N}]")
    if not 0 <= alpha_c <= N * (N - 1) // 2:
        raise BudgetExceeded(f"alpha_c={alpha_c} must lie in [0, {N * (N - 1) // 2}]")


def enumerate_attacks(
    N: int, alpha_s: int, alpha_c: int, exact: bool = True
) -> Iterator[AttackRealization]:
    """All attack realizations within budget.

    With ``exact`` only realizations using the full budgets are produced, in
    lexicographic (sensing, links) order.
    """
    check_budgets(N, alpha_s, alpha_c)
    edges = list(itertools.combinations(range(N), 2))
    s_sizes = [alpha_s] if exact else range(alpha_s + 1)
    c_sizes = [alpha_c] if exact else range(alpha_c + 1)
    for ks in s_sizes:
        for sensing in itertools.combinations(range(N), ks):
            for kc in c_sizes:
                for blocked in itertools.combinations(edges, kc):
                    yield AttackRealization(frozenset(sensing), frozenset(blocked))


def enumeration_size(N: int, alpha_s: int, alpha_c: int, exact: bool = True) -> int:
    if exact:
        return attack_runtime_budget(N, alpha_s, alpha_c)
    return sum(comb(N, s) for s in range(alpha_s + 1)) * sum(
        comb(N * (N - 1) // 2, c) for c in range(alpha_c + 1)
    )


@lru_cache(maxsize=4096)
def _components(n: int, blocked: frozenset) -> tuple[int, ...]:
    return tuple(mask_of(c) for c in connected_components(n, blocked))


def attack_masks(N: int, attacks: Sequence[AttackRealization]) -> np.ndarray:
    """(A, C) array of contributing-robot bitmasks per surviving subgroup.

    Rows are padded by repeating their first entry, so a row-wise max over
    a subset-value table gives the team quality under that attack.
    """
    rows = []
    for atk in attacks:
        keep = ~mask_of(atk.sensing)
        rows.append([m & keep for m in _components(N, atk.edges)])
    width = max(len(r) for r in rows)
    out = np.empty((len(rows), width), dtype=np.intp)
    for a, r in enumerate(rows):
        out[a] = r + [r[0]] * (width - len(r))
    return out


def worst_case_attack(
    problem: Scenario | TrackingObjective,
    assignment: Assignment,
    alpha_s: int,
    alpha_c: int,
    cap: int = DEFAULT_CAP,
    exact: bool = True,
) -> tuple[AttackRealization, float]:
    """Exhaustive minimizer of the team quality over all budget-feasible attacks."""
    obj = as_objective(problem)
    N = obj.n
    check_budgets(N, alpha_s, alpha_c)
    size = enumeration_size(N, alpha_s, alpha_c, exact)
    if size > cap or (1 << N) > cap:
        raise ScaleExceeded(f"{size} attack realizations exceed the cap of {cap}")
    attacks = list(enumerate_attacks(N, alpha_s, alpha_c, exact))
    table = obj.subset_table(np.asarray([assignment]))[0]
    values = table[attack_masks(N, attacks)].max(axis=1)
    best = float(values.min())
    ties = np.flatnonzero(values == best)
    winner = min((attacks[t] for t in ties), key=AttackRealization.sort_key)
    return winner, best


def isolating_edges(N: int, robots: Sequence[int]) -> frozenset[tuple[int, int]]:
    """Every link incident to one of ``robots``."""
    return frozenset(
        (min(i, k), max(i, k)) for i in robots for k in range(N) if k != i
    )


def bounded_rational_attack(
    problem: Scenario | TrackingObjective,
    assignment: Assignment,
    alpha_s: int,
    alpha_c: int,
    rank_by: str = "assigned",
) -> AttackRealization:
    """Remove sensing from the top robots, then isolate the next-ranked ones.

    Robots are ranked by their individual tracking quality, evaluated at the
    assigned inputs (``rank_by="assigned"``) or at each robot's best input
    (``rank_by="solo_best"``). The number of isolated robots comes from the
    communication attack approximation; isolating them may block more or
    fewer links than ``alpha_c``.
    """
    obj = as_objective(problem)
    N = obj.n
    if rank_by == "assigned":
        scores = [obj.phi(assignment, {i}) for i in range(N)]
    elif rank_by == "solo_best":
        scores = []
        for i in range(N):
            choice = list(assignment)
            vals = []
            for u in range(len(obj.scenario.inputs[i])):
                choice[i] = u
                vals.append(obj.phi(choice, {i}))
            scores.append(max(vals))
    else:
        raise ValueError(f"unknown rank_by {rank_by!r}")
    order = sorted(range(N), key=lambda i: (-scores[i], i))
    k_s = min(max(alpha_s, 0), N)
    k_c = min(caa(N, alpha_c).alpha_cs, N - k_s)
    isolated = order[k_s : k_s + k_c]
    return AttackRealization(frozenset(order[:k_s]), isolating_edges(N, isolated))
