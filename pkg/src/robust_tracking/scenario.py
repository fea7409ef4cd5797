"""Problem instances and the random instance generator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ekf import TargetBelief
from .models import ControlInput, RobotState, SensorNoiseParams, TargetState

DEFAULT_NUS = (-3.0, -1.0, 1.0, 3.0)
DEFAULT_OMEGAS = (0.0, 1.0, 3.0)
TARGET_SPEEDS = (-5.0, -2.5, -5.0 / 3.0, 5.0 / 3.0, 2.5, 5.0)
TARGET_TURN_RATES = (1.0 / 10.0, 1.0 / 20.0, 1.0 / 30.0)


def default_inputs() -> tuple[ControlInput, ...]:
    """{+-1, +-3} m/s x {0, 1, 3} rad/s, twelve inputs in lexicographic order."""
    return tuple(ControlInput(nu, om) for nu, om in itertools.product(DEFAULT_NUS, DEFAULT_OMEGAS))


@dataclass(frozen=True, eq=False)
class Scenario:
    """One planning instance: robots, their input sets, targets and beliefs."""

    robots: tuple[RobotState, ...]
    inputs: tuple[tuple[ControlInput, ...], ...]
    targets: tuple[TargetState, ...]
    beliefs: tuple[TargetBelief, ...]
    sensor: SensorNoiseParams = field(default_factory=SensorNoiseParams)
    tau: float = 1.0
    arena: tuple[float, float] = (100.0, 100.0)
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.robots or not self.targets:
            raise ValueError("a scenario needs at least one robot and one target")
        if len(self.inputs) != len(self.robots):
            raise ValueError("one input set per robot is required")
        if any(len(u) == 0 for u in self.inputs):
            raise ValueError("every robot needs a non-empty input set")
        if len(self.beliefs) != len(self.targets):
            raise ValueError("one initial belief per target is required")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        w, h = self.arena
        for p in [r.position for r in self.robots] + [t.position for t in self.targets]:
            if not (0.0 <= p[0] <= w and 0.0 <= p[1] <= h):
                raise ValueError(f"initial position {p} lies outside the {w}x{h} arena")

    @property
    def n_robots(self) -> int:
        return len(self.robots)

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """All links of the complete communication graph."""
        return list(itertools.combinations(range(self.n_robots), 2))

    @property
    def input_counts(self) -> tuple[int, ...]:
        return tuple(len(u) for u in self.inputs)

    def controls(self, assignment: Sequence[int]) -> list[ControlInput]:
        return [self.inputs[i][k] for i, k in enumerate(assignment)]


@dataclass(frozen=True)
class GeneratorSpec:
    n_robots: int
    n_targets: int
    arena: tuple[float, float] = (100.0, 100.0)
    inputs: tuple[ControlInput, ...] = field(default_factory=default_inputs)
    target_speeds: tuple[float, ...] = TARGET_SPEEDS
    target_turn_rates: tuple[float, ...] = TARGET_TURN_RATES
    sigma_q: float = 0.5
    sensor: SensorNoiseParams = field(default_factory=SensorNoiseParams)
    tau: float = 1.0
    initial_cov: float = 4.0
    initial_mean_std: float = 2.0

    def __post_init__(self) -> None:
        if self.n_robots < 1 or self.n_targets < 1:
            raise ValueError("n_robots and n_targets must be positive")
        if min(self.arena) <= 0:
            raise ValueError("arena dimensions must be positive")
        if not self.inputs:
            raise ValueError("inputs must be non-empty")


def generate_scenario(spec: GeneratorSpec, seed: int) -> Scenario:
    """Uniform robot/target placement, zero headings, random target motion."""
    rng = np.random.default_rng(seed)
    w, h = spec.arena
    robot_xy = rng.uniform((0.0, 0.0), (w, h), size=(spec.n_robots, 2))
    target_xy = rng.uniform((0.0, 0.0), (w, h), size=(spec.n_targets, 2))
    speeds = rng.choice(np.asarray(spec.target_speeds), size=spec.n_targets)
    rates = rng.choice(np.asarray(spec.target_turn_rates), size=spec.n_targets)
    offsets = rng.normal(0.0, spec.initial_mean_std, size=(spec.n_targets, 2))

    robots = tuple(RobotState(float(x), float(y), 0.0) for x, y in robot_xy)
    targets = tuple(
        TargetState(float(p[0]), float(p[1]), float(v), float(om), spec.sigma_q)
        for p, v, om in zip(target_xy, speeds, rates)
    )
    beliefs = tuple(
        TargetBelief(p + d, spec.initial_cov * np.eye(2)) for p, d in zip(target_xy, offsets)
    )
    return Scenario(
        robots=robots,
        inputs=tuple(tuple(spec.inputs) for _ in range(spec.n_robots)),
        targets=targets,
        beliefs=beliefs,
        sensor=spec.sensor,
        tau=spec.tau,
        arena=(float(w), float(h)),
        seed=int(seed),
    )
