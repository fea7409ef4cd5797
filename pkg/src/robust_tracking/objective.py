"""Tracking-quality set function and team quality under attack.

The tracking quality of a set of robots is the total reduction in the trace
of the per-target EKF covariance obtained by fusing their next-step
measurements. Under a communication attack the team splits into connected
subgroups and the team quality is that of the best subgroup; robots whose
sensing is attacked still relay but contribute no measurements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ekf import inv2, predict
from .models import measure, measurement_jacobian, step_robot
from .scenario import Scenario

# robot index -> input index into that robot's input set
Assignment = Sequence[int]


def _edge(i: int, k: int) -> tuple[int, int]:
    if i == k:
        raise ValueError(f"edge ({i}, {k}) is a self-loop")
    return (i, k) if i < k else (k, i)


@dataclass(frozen=True)
class AttackRealization:
    sensing: frozenset[int] = frozenset()
    edges: frozenset[tuple[int, int]] = frozenset()

    @classmethod
    def of(cls, sensing: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()) -> "AttackRealization":
        return cls(frozenset(sensing), frozenset(_edge(i, k) for i, k in edges))

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.sensing)), tuple(sorted(self.edges)))


@dataclass
class EvalCounter:
    """Number of tracking-quality evaluations."""

    count: int = 0

    def add(self, k: int = 1) -> None:
        self.count += k


def connected_components(n: int, blocked: Iterable[tuple[int, int]]) -> list[frozenset[int]]:
    """Components of the complete graph on ``n`` nodes minus ``blocked``.

    Sorted by smallest member.
    """
    blocked = {_edge(i, k) for i, k in blocked}
    for i, k in blocked:
        if not (0 <= i < n and 0 <= k < n):
            raise ValueError(f"edge ({i}, {k}) outside 0..{n - 1}")
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, k in itertools.combinations(range(n), 2):
        if (i, k) not in blocked:
            ri, rk = find(i), find(k)
            if ri != rk:
                parent[max(ri, rk)] = min(ri, rk)
    groups: dict[int, set[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i)
    return sorted((frozenset(g) for g in groups.values()), key=min)


class TrackingObjective:
    """Cached evaluator of the tracking quality for one scenario.

    Every quantity that does not depend on which robots contribute (predicted
    beliefs, next robot states, per-measurement information matrices) is
    computed once. ``counter`` counts calls to :meth:`phi`.
    """

    def __init__(self, scenario: Scenario, counter: EvalCounter | None = None):
        self.scenario = scenario
        self.counter = counter if counter is not None else EvalCounter()
        self.n = scenario.n_robots
        self.m = scenario.n_targets
        self.predicted = [
            predict(b, t, scenario.tau) for b, t in zip(scenario.beliefs, scenario.targets)
        ]
        self.prior_trace = [float(np.trace(b.cov)) for b in self.predicted]
        self.prior_info = []
        for b in self.predicted:
            p = inv2(b.cov)
            self.prior_info.append((float(p[0, 0]), float(0.5 * (p[0, 1] + p[1, 0])), float(p[1, 1])))

        self.next_states = [
            [step_robot(x, u, scenario.tau) for u in us]
            for x, us in zip(scenario.robots, scenario.inputs)
        ]
        # info[i][u][j] = upper triangle of H^T R^-1 H for robot i, input u, target j
        self.info: list[list[list[tuple[float, float, float]]]] = []
        for states in self.next_states:
            per_input = []
            for x in states:
                per_target = []
                for b in self.predicted:
                    H = measurement_jacobian(x, b.mean)
                    _, R = measure(x, b.mean, scenario.sensor)
                    J = H.T @ np.diag(1.0 / np.diag(R)) @ H
                    per_target.append((float(J[0, 0]), float(0.5 * (J[0, 1] + J[1, 0])), float(J[1, 1])))
                per_input.append(per_target)
            self.info.append(per_input)
        self._info_array: np.ndarray | None = None

    def phi(self, assignment: Assignment, contributing: Iterable[int]) -> float:
        """Tracking quality of ``contributing`` robots under ``assignment``."""
        self.counter.add()
        members = sorted(set(contributing))
        if not members:
            return 0.0
        for i in members:
            if not 0 <= i < self.n:
                raise ValueError(f"robot {i} not in scenario")
        rows = [self.info[i][assignment[i]] for i in members]
        total = 0.0
        for j in range(self.m):
            a, b, c = self.prior_info[j]
            for row in rows:
                ja, jb, jc = row[j]
                a = a + ja
                b = b + jb
                c = c + jc
            total += self.prior_trace[j] - (a + c) / (a * c - b * b)
        return total

    def best_subgroup(
        self, assignment: Assignment, attack: AttackRealization
    ) -> tuple[float, frozenset[int], frozenset[int]]:
        """(value, component, contributing members) of the best-performing subgroup.

        Ties go to the component with the smallest member.
        """
        best = None
        for comp in connected_components(self.n, attack.edges):
            members = comp - attack.sensing
            value = self.phi(assignment, members)
            if best is None or value > best[0]:
                best = (value, comp, frozenset(members))
        return best

    def team(self, assignment: Assignment, attack: AttackRealization) -> float:
        return self.best_subgroup(assignment, attack)[0]

    @property
    def info_array(self) -> np.ndarray:
        """(N, max |U_i|, M, 3) array of the cached information entries."""
        if self._info_array is None:
            umax = max(len(u) for u in self.info)
            arr = np.full((self.n, umax, self.m, 3), np.nan)
            for i, per_input in enumerate(self.info):
                arr[i, : len(per_input)] = np.asarray(per_input)
            self._info_array = arr
        return self._info_array

    def batch_phi(self, assignments: np.ndarray, contributing: Iterable[int]) -> np.ndarray:
        """:meth:`phi` of one fixed robot subset for a batch of assignments."""
        assignments = np.atleast_2d(np.asarray(assignments, dtype=np.intp))
        k = assignments.shape[0]
        self.counter.add(k)
        members = sorted(set(contributing))
        if not members:
            return np.zeros(k)
        lam = np.broadcast_to(np.asarray(self.prior_info), (k, self.m, 3))
        for i in members:
            lam = lam + self.info_array[i, assignments[:, i]]
        a, b, c = lam[..., 0], lam[..., 1], lam[..., 2]
        terms = np.asarray(self.prior_trace) - (a + c) / (a * c - b * b)
        acc = np.zeros(k)
        for j in range(self.m):
            acc = acc + terms[:, j]
        return acc

    def subset_table(self, assignments: np.ndarray) -> np.ndarray:
        """Tracking quality of every robot subset for a batch of assignments.

        Returns an array of shape (K, 2**N) indexed by subset bitmask (bit i
        set means robot i contributes). Values match :meth:`phi` exactly
        because information is accumulated in the same order.
        """
        assignments = np.atleast_2d(np.asarray(assignments, dtype=np.intp))
        k = assignments.shape[0]
        n_masks = 1 << self.n
        self.counter.add(k * n_masks)
        gathered = self.info_array[np.arange(self.n), assignments]  # (K, N, M, 3)
        lam = np.empty((n_masks, k, self.m, 3))
        lam[0] = np.asarray(self.prior_info)
        prior_trace = np.asarray(self.prior_trace)
        out = np.zeros((k, n_masks))
        for mask in range(1, n_masks):
            hb = mask.bit_length() - 1
            lam[mask] = lam[mask ^ (1 << hb)] + gathered[:, hb]
            a, b, c = lam[mask, ..., 0], lam[mask, ..., 1], lam[mask, ..., 2]
            terms = prior_trace - (a + c) / (a * c - b * b)
            acc = np.zeros(k)
            for j in range(self.m):
                acc = acc + terms[:, j]
            out[:, mask] = acc
        return out


def as_objective(problem: Scenario | TrackingObjective) -> TrackingObjective:
    return problem if isinstance(problem, TrackingObjective) else TrackingObjective(problem)


def phi_subset(
    problem: Scenario | TrackingObjective, assignment: Assignment, contributing: Iterable[int]
) -> float:
    return as_objective(problem).phi(assignment, contributing)


def team_phi(
    problem: Scenario | TrackingObjective, assignment: Assignment, attack: AttackRealization
) -> float:
    return as_objective(problem).team(assignment, attack)


def mask_of(members: Iterable[int]) -> int:
    out = 0
    for i in members:
        out |= 1 << i
    return out
