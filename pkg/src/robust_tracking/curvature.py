"""Brute-force curvature of set functions and approximation-bound certificates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .adversary import DEFAULT_CAP, worst_case_attack
from .caa import caa
from .errors import NotMonotone, NotSubmodular, ScaleExceeded, ZeroSingleton
from .objective import TrackingObjective, as_objective
from .planner import plan_ratt, robust_optimum
from .scenario import Scenario

CURVATURE_CAP = 8
MONOTONE_TOL = 1e-12
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class SetFunctionOracle:
    ground: Sequence[Hashable]
    eval: Callable[[frozenset], float]

    def table(self, cap: int = CURVATURE_CAP) -> list[float]:
        """Values on every subset, indexed by bitmask over ``ground``."""
        n = len(self.ground)
        if n > cap:
            raise ScaleExceeded(f"ground set of {n} exceeds the curvature cap of {cap}")
        return [
            float(self.eval(frozenset(x for b, x in enumerate(self.ground) if mask >> b & 1)))
            for mask in range(1 << n)
        ]


@dataclass(frozen=True)
class BoundCertificate:
    ratio: float
    bound: float
    c_phi: float | None
    k_phi: float | None
    satisfied: bool
    alpha_cs: int = 0
    ratt_value: float = 0.0
    opt_value: float = 0.0
    k_bound: float | None = None
    k_satisfied: bool | None = None


def _marginals(values: list[float], n: int, b: int) -> list[float]:
    bit = 1 << b
    return [values[m | bit] - values[m] for m in range(1 << n) if not m & bit]


def check_monotone(values: list[float], n: int) -> None:
    for b in range(n):
        worst = min(_marginals(values, n, b))
        if worst < -MONOTONE_TOL:
            raise NotMonotone(f"element {b} has marginal gain {worst:.3e}")


def is_submodular(values: list[float], n: int, tol: float = MONOTONE_TOL) -> bool:
    """Pairwise diminishing-returns check over every base set."""
    for m in range(1 << n):
        for a in range(n):
            if m >> a & 1:
                continue
            for b in range(a + 1, n):
                if m >> b & 1:
                    continue
                ma, mb = m | 1 << a, m | 1 << b
                if values[ma] + values[mb] < values[ma | 1 << b] + values[m] - tol:
                    return False
    return True


def total_curvature(f: SetFunctionOracle, cap: int = CURVATURE_CAP) -> float:
    """One minus the smallest ratio of an element's marginal gains over any two base sets.

    Base sets where the element's marginal gain vanishes (at most 1e-12) are
    skipped as denominators; an element whose marginal gains all vanish
    contributes ratio 1.
    """
    n = len(f.ground)
    values = f.table(cap)
    check_monotone(values, n)
    best = 1.0
    for b in range(n):
        gains = _marginals(values, n, b)
        top = max(gains)
        if top <= ZERO_TOL:
            continue
        best = min(best, max(min(gains), 0.0) / top)
    return 1.0 - best


def curvature(f: SetFunctionOracle, cap: int = CURVATURE_CAP) -> float:
    """One minus the smallest ratio of an element's last marginal to its singleton value."""
    n = len(f.ground)
    values = f.table(cap)
    check_monotone(values, n)
    if not is_submodular(values, n):
        raise NotSubmodular("set function violates diminishing returns")
    full = (1 << n) - 1
    best = 1.0
    for b in range(n):
        single = values[1 << b]
        if abs(single) <= ZERO_TOL:
            raise ZeroSingleton(f"element {f.ground[b]!r} has zero singleton value")
        best = min(best, (values[full] - values[full ^ 1 << b]) / single)
    return min(max(1.0 - best, 0.0), 1.0)


def robot_subset_oracle(obj: TrackingObjective, assignment: Sequence[int]) -> SetFunctionOracle:
    """Tracking quality over robot subsets with every robot's input fixed."""
    return SetFunctionOracle(tuple(range(obj.n)), lambda s: obj.phi(assignment, s))


def nondecreasing_bound(c_phi: float, alpha_cs: int) -> float:
    base = (1.0 - c_phi) ** 3
    return base if alpha_cs == 0 else min(base, (1.0 - c_phi) ** 2 / alpha_cs)


def submodular_bound(k_phi: float, alpha_cs: int) -> float:
    base = (1.0 - k_phi) / (1.0 + k_phi)
    return base if alpha_cs == 0 else min(base, (1.0 - k_phi) / alpha_cs)


def certify_bound(
    problem: Scenario | TrackingObjective,
    alpha_s: int,
    alpha_c: int,
    cap: int = DEFAULT_CAP,
    curvature_cap: int = CURVATURE_CAP,
) -> BoundCertificate:
    """Compare the robust planner's worst-case value with the exhaustive optimum.

    Curvature is measured on the robot-subset function at the robust
    planner's chosen inputs.
    """
    obj = as_objective(problem)
    plan = plan_ratt(obj, alpha_s, alpha_c)
    _, ratt_value = worst_case_attack(obj, plan.assignment, alpha_s, alpha_c, cap)
    _, opt_value = robust_optimum(obj, alpha_s, alpha_c, cap)
    ratio = 1.0 if opt_value <= ZERO_TOL else ratt_value / opt_value

    alpha_cs = caa(obj.n, alpha_c).alpha_cs
    oracle = robot_subset_oracle(obj, plan.assignment)
    c_phi = total_curvature(oracle, curvature_cap)
    bound = nondecreasing_bound(c_phi, alpha_cs)
    satisfied = ratio >= bound - 1e-9

    k_phi = k_bound = k_satisfied = None
    try:
        k_phi = curvature(oracle, curvature_cap)
    except (NotSubmodular, ZeroSingleton):
        pass
    else:
        k_bound = submodular_bound(k_phi, alpha_cs)
        k_satisfied = ratio >= k_bound - 1e-9
    return BoundCertificate(
        ratio=ratio,
        bound=bound,
        c_phi=c_phi,
        k_phi=k_phi,
        satisfied=satisfied,
        alpha_cs=alpha_cs,
        ratt_value=ratt_value,
        opt_value=opt_value,
        k_bound=k_bound,
        k_satisfied=k_satisfied,
    )


# name used by the operation catalogue this package implements
certify_theorem1 = certify_bound
