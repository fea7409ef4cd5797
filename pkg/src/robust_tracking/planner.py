"""Robust planner and the comparison planners.

``plan_ratt`` converts the link-attack budget into extra sensing attacks,
assigns individually-best inputs to the top-ranked "bait" robots and picks
inputs for the rest greedily. The baselines are exhaustive robust search
(``plan_opt``), exhaustive non-robust search (``plan_nropt``), plain greedy
and uniform random selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .adversary import DEFAULT_CAP, attack_masks, check_budgets, enumerate_attacks, enumeration_size
from .caa import caa
from .errors import ScaleExceeded
from .objective import TrackingObjective, as_objective
from .scenario import Scenario

PLANNERS = ("opt", "ratt", "nropt", "greedy", "random")


@dataclass(frozen=True)
class PlanResult:
    assignment: tuple[int, ...]
    baits: frozenset[int]
    greedy_order: tuple[int, ...]
    alpha: int
    alpha_cs: int
    evals: int
    solo_best: tuple[float, ...] = ()
    gains: tuple[float, ...] = ()


def solo_best(obj: TrackingObjective, i: int) -> tuple[int, float]:
    """Best input of robot ``i`` acting alone, and its tracking quality.

    Ties go to the smallest input index.
    """
    choice = [0] * obj.n
    best_u, best_v = 0, None
    for u in range(len(obj.scenario.inputs[i])):
        choice[i] = u
        v = obj.phi(choice, (i,))
        if best_v is None or v > best_v:
            best_u, best_v = u, v
    return best_u, best_v


def greedy_select(
    obj: TrackingObjective,
    choice: list[int],
    candidates: Iterable[int],
    base: Iterable[int] = (),
) -> tuple[list[int], list[float]]:
    """Assign inputs to ``candidates`` one robot per round by largest marginal gain.

    Marginal gains are measured against the robots already selected in
    earlier rounds plus ``base``. ``choice`` is updated in place. Ties go
    to the smallest robot id, then the smallest input index.
    """
    remaining = sorted(set(candidates))
    selected: list[int] = []
    gains: list[float] = []
    base = set(base)
    while remaining:
        cond = base | set(selected)
        current = obj.phi(choice, cond)
        best = None
        for i in remaining:
            keep = choice[i]
            for u in range(len(obj.scenario.inputs[i])):
                choice[i] = u
                gain = obj.phi(choice, cond | {i}) - current
                if best is None or gain > best[0]:
                    best = (gain, i, u)
            choice[i] = keep
        gain, i, u = best
        choice[i] = u
        selected.append(i)
        remaining.remove(i)
        gains.append(gain)
    return selected, gains


def plan_ratt(
    problem: Scenario | TrackingObjective,
    alpha_s: int,
    alpha_c: int,
    condition_on_baits: bool = False,
) -> PlanResult:
    """Robust planning against ``alpha_s`` sensing and ``alpha_c`` link attacks.

    With ``condition_on_baits`` the greedy marginal gains are measured on
    top of the bait robots instead of the greedy robots alone.
    """
    obj = as_objective(problem)
    N = obj.n
    check_budgets(N, alpha_s, alpha_c)
    start = obj.counter.count

    alpha_cs = caa(N, alpha_c).alpha_cs
    alpha = alpha_s + alpha_cs
    solo = [solo_best(obj, i) for i in range(N)]
    choice = [u for u, _ in solo]
    solo_values = tuple(v for _, v in solo)

    if alpha < N:
        ranked = sorted(range(N), key=lambda i: (-solo_values[i], i))
        baits = frozenset(ranked[:alpha])
        rest = [i for i in range(N) if i not in baits]
        base = baits if condition_on_baits else ()
        order, gains = greedy_select(obj, choice, rest, base)
    else:
        baits, order, gains = frozenset(range(N)), [], []

    return PlanResult(
        assignment=tuple(choice),
        baits=baits,
        greedy_order=tuple(order),
        alpha=alpha,
        alpha_cs=alpha_cs,
        evals=obj.counter.count - start,
        solo_best=solo_values,
        gains=tuple(gains),
    )


def plan_greedy(problem: Scenario | TrackingObjective) -> tuple[int, ...]:
    """Standard greedy over all robots, ignoring attacks."""
    obj = as_objective(problem)
    choice = [0] * obj.n
    greedy_select(obj, choice, range(obj.n))
    return tuple(choice)


def plan_random(problem: Scenario | TrackingObjective, rng: np.random.Generator) -> tuple[int, ...]:
    """Independent uniform draw from each robot's input set."""
    scenario = problem.scenario if isinstance(problem, TrackingObjective) else problem
    return tuple(int(rng.integers(len(us))) for us in scenario.inputs)


def _assignment_chunks(counts: Sequence[int], chunk: int):
    total = prod(counts)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total))
        yield np.stack(np.unravel_index(idx, counts), axis=1)


def _argmax_over_assignments(obj: TrackingObjective, score, chunk: int) -> tuple[tuple[int, ...], float]:
    best_a, best_v = None, -np.inf
    for block in _assignment_chunks(obj.scenario.input_counts, chunk):
        values = score(obj.subset_table(block))
        k = int(np.argmax(values))
        # strict improvement keeps the lexicographically first maximizer
        if values[k] > best_v:
            best_a, best_v = tuple(int(u) for u in block[k]), float(values[k])
    return best_a, best_v


def robust_optimum(
    problem: Scenario | TrackingObjective,
    alpha_s: int,
    alpha_c: int,
    cap: int = DEFAULT_CAP,
    sweep_smaller: bool = False,
    chunk: int = 4096,
) -> tuple[tuple[int, ...], float]:
    """Exhaustive max over inputs of the min over attacks; returns (assignment, value)."""
    obj = as_objective(problem)
    N = obj.n
    check_budgets(N, alpha_s, alpha_c)
    n_assign = prod(obj.scenario.input_counts)
    cost = n_assign * enumeration_size(N, alpha_s, alpha_c, exact=not sweep_smaller)
    if cost > cap:
        raise ScaleExceeded(f"exhaustive robust search needs {cost} evaluations (cap {cap})")
    masks = attack_masks(N, list(enumerate_attacks(N, alpha_s, alpha_c, exact=not sweep_smaller)))
    return _argmax_over_assignments(
        obj, lambda table: table[:, masks].max(axis=2).min(axis=1), chunk
    )


def plan_opt(
    problem: Scenario | TrackingObjective,
    alpha_s: int,
    alpha_c: int,
    cap: int = DEFAULT_CAP,
    sweep_smaller: bool = False,
) -> tuple[int, ...]:
    return robust_optimum(problem, alpha_s, alpha_c, cap, sweep_smaller)[0]


def plan_nropt(problem: Scenario | TrackingObjective, cap: int = DEFAULT_CAP) -> tuple[int, ...]:
    """Exhaustive maximizer of the unattacked team quality."""
    obj = as_objective(problem)
    n_assign = prod(obj.scenario.input_counts)
    if n_assign > cap:
        raise ScaleExceeded(f"exhaustive search needs {n_assign} evaluations (cap {cap})")
    best_a, best_v = None, -np.inf
    for block in _assignment_chunks(obj.scenario.input_counts, 4096):
        values = obj.batch_phi(block, range(obj.n))
        k = int(np.argmax(values))
        if values[k] > best_v:
            best_a, best_v = tuple(int(u) for u in block[k]), float(values[k])
    return best_a
