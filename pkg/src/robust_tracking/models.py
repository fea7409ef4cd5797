"""Unicycle robots, circular-motion targets and a range-bearing sensor."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CoincidentPose

EPS_RANGE = 1e-6


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.pi - (math.pi - angle) % (2.0 * math.pi)
    # float modulo may return the divisor itself
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class RobotState:
    x: float
    y: float
    theta: float = 0.0

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class ControlInput:
    nu: float
    omega: float


@dataclass(frozen=True)
class TargetState:
    """True target position plus its (known) circular-motion parameters."""

    y1: float
    y2: float
    nu: float
    omega: float
    sigma_q: float = 0.5

    def __post_init__(self) -> None:
        if self.sigma_q < 0:
            raise ValueError("sigma_q must be non-negative")

    @property
    def position(self) -> tuple[float, float]:
        return (self.y1, self.y2)


@dataclass(frozen=True)
class SensorNoiseParams:
    """Affine growth of the range/bearing noise std with range and |bearing|.

    The defaults are implementation choices, not measured sensor values.
    """

    sigma_r0: float = 0.5
    kappa_r: float = 0.02
    sigma_b0: float = 0.05
    kappa_b: float = 0.02

    def __post_init__(self) -> None:
        if min(self.sigma_r0, self.kappa_r, self.sigma_b0, self.kappa_b) < 0:
            raise ValueError("noise parameters must be non-negative")
        if self.sigma_r0 <= 0 or self.sigma_b0 <= 0:
            raise ValueError("sigma_r0 and sigma_b0 must be positive")

    def stds(self, r: float, bearing: float) -> tuple[float, float]:
        """Range and bearing noise std at range ``r`` and relative ``bearing``."""
        return (self.sigma_r0 + self.kappa_r * r, self.sigma_b0 + self.kappa_b * abs(bearing))


class Measurement(NamedTuple):
    range: float
    bearing: float


def step_robot(s: RobotState, u: ControlInput, tau: float) -> RobotState:
    """Advance a unicycle by one sampling period."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    return RobotState(
        s.x + u.nu * tau * math.cos(s.theta),
        s.y + u.nu * tau * math.sin(s.theta),
        wrap_angle(s.theta + tau * u.omega),
    )


def step_target(t: TargetState, tau: float, noise: Sequence[float] = (0.0, 0.0)) -> TargetState:
    """Advance a target along its circular-motion model.

    ``noise`` is the process-noise sample, drawn by the caller from
    N(0, sigma_q^2 I). Pass zeros for the deterministic prediction.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    return TargetState(
        t.y1 + t.nu * math.cos(tau * t.omega) + noise[0],
        t.y2 + t.nu * math.sin(tau * t.omega) + noise[1],
        t.nu,
        t.omega,
        t.sigma_q,
    )


def _offset(robot: RobotState, target_pos: Sequence[float]) -> tuple[float, float, float]:
    d1 = target_pos[0] - robot.x
    d2 = target_pos[1] - robot.y
    r = math.hypot(d1, d2)
    if r < EPS_RANGE:
        raise CoincidentPose(f"robot at ({robot.x}, {robot.y}) coincides with target")
    return d1, d2, r


def measure(
    robot: RobotState,
    target_pos: Sequence[float],
    sensor: SensorNoiseParams | None = None,
) -> tuple[Measurement, np.ndarray]:
    """Noise-free range/bearing of a target and the measurement covariance."""
    sensor = sensor or SensorNoiseParams()
    d1, d2, r = _offset(robot, target_pos)
    bearing = wrap_angle(math.atan2(d2, d1) - robot.theta)
    sr, sb = sensor.stds(r, bearing)
    return Measurement(r, bearing), np.diag([sr * sr, sb * sb])


def measurement_jacobian(robot: RobotState, target_pos: Sequence[float]) -> np.ndarray:
    """Jacobian of (range, bearing) with respect to the target position."""
    d1, d2, r = _offset(robot, target_pos)
    # theta + bearing is the absolute line-of-sight angle, so sin/cos reduce to d2/r, d1/r
    phi = math.atan2(d2, d1)
    return np.array([[d1, d2], [-math.sin(phi), math.cos(phi)]]) / r
