"""Per-target EKF prediction and information-form multi-robot fusion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import SingularPrior
from .models import (
    Measurement,
    RobotState,
    SensorNoiseParams,
    TargetState,
    measure,
    measurement_jacobian,
    wrap_angle,
)

DET_GUARD = 1e-15


@dataclass
class TargetBelief:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=float).reshape(2)
        self.cov = np.asarray(self.cov, dtype=float).reshape(2, 2)


@dataclass
class FusedUpdateInput:
    prior: TargetBelief
    contributions: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)


def inv2(m: np.ndarray) -> np.ndarray:
    """Closed-form inverse of a 2x2 matrix."""
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    det = a * d - b * c
    if abs(det) <= DET_GUARD:
        raise SingularPrior(f"2x2 matrix is singular (det={det:.3e})")
    return np.array([[d, -b], [-c, a]]) / det


def information_matrix(H: np.ndarray, R: np.ndarray) -> np.ndarray:
    """H^T R^-1 H for one measurement."""
    return H.T @ inv2(R) @ H


def predict(b: TargetBelief, t: TargetState, tau: float) -> TargetBelief:
    """One-step prediction; the circular-motion increment does not depend on the state."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    step = np.array([t.nu * math.cos(tau * t.omega), t.nu * math.sin(tau * t.omega)])
    return TargetBelief(b.mean + step, b.cov + (t.sigma_q**2) * np.eye(2))


def fused_update_cov(
    prior: TargetBelief | FusedUpdateInput,
    contributions: Sequence[tuple[np.ndarray, np.ndarray]] | None = None,
) -> np.ndarray:
    """Posterior covariance after fusing every contribution's information.

    Computes ``(P^-1 + sum_k H_k^T R_k^-1 H_k)^-1``. The result does not
    depend on contribution order beyond round-off.
    """
    if isinstance(prior, FusedUpdateInput):
        contributions = prior.contributions if contributions is None else contributions
        prior = prior.prior
    contributions = contributions or []
    if not contributions:
        return prior.cov.copy()
    lam = inv2(prior.cov)
    for H, R in contributions:
        lam = lam + information_matrix(np.asarray(H, float), np.asarray(R, float))
    post = inv2(lam)
    return 0.5 * (post + post.T)


def posterior_mean(
    prior: TargetBelief,
    measurements: Sequence[tuple[Measurement, RobotState]],
    sensor: SensorNoiseParams | None = None,
) -> np.ndarray:
    """Sequential EKF mean update, relinearizing at the running estimate."""
    sensor = sensor or SensorNoiseParams()
    mean = prior.mean.copy()
    cov = prior.cov.copy()
    for z, robot in measurements:
        H = measurement_jacobian(robot, mean)
        h, R = measure(robot, mean, sensor)
        innov = np.array([z[0] - h.range, wrap_angle(z[1] - h.bearing)])
        S = H @ cov @ H.T + R
        K = cov @ H.T @ inv2(S)
        mean = mean + K @ innov
        ikh = np.eye(2) - K @ H
        cov = ikh @ cov @ ikh.T + K @ R @ K.T
    return mean
