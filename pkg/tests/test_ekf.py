from __future__ import annotations

import numpy as np
import pytest

from robust_tracking.ekf import (
    FusedUpdateInput,
    TargetBelief,
    fused_update_cov,
    inv2,
    posterior_mean,
    predict,
)
from robust_tracking.errors import SingularPrior
from robust_tracking.models import RobotState, TargetState, measure, measurement_jacobian


def sequential_kf_cov(P, contributions):
    """Standard-form covariance recursion, one measurement at a time."""
    for H, R in contributions:
        S = H @ P @ H.T + R
        K = P @ H.T @ np.linalg.inv(S)
        P = (np.eye(2) - K @ H) @ P
    return P


def random_spd(rng, scale=4.0):
    A = rng.normal(size=(2, 2))
    return A @ A.T + scale * np.eye(2) * rng.uniform(0.2, 1.0)


def test_inv2_matches_numpy(rng):
    for _ in range(50):
        m = random_spd(rng)
        assert np.allclose(inv2(m), np.linalg.inv(m), rtol=1e-12, atol=1e-14)


def test_inv2_singular():
    with pytest.raises(SingularPrior):
        inv2(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(SingularPrior):
        fused_update_cov(TargetBelief([0, 0], np.zeros((2, 2))), [(np.eye(2), np.eye(2))])


def test_predict_adds_motion_and_process_noise():
    b = TargetBelief([1.0, 2.0], 3.0 * np.eye(2))
    t = TargetState(0.0, 0.0, 2.0, 0.5, sigma_q=0.7)
    p = predict(b, t, 1.0)
    assert np.allclose(p.mean, [1 + 2 * np.cos(0.5), 2 + 2 * np.sin(0.5)])
    assert np.allclose(p.cov, (3.0 + 0.49) * np.eye(2))


def test_empty_contributions_return_prior():
    b = TargetBelief([0, 0], [[2.0, 0.3], [0.3, 1.0]])
    out = fused_update_cov(b, [])
    assert np.array_equal(out, b.cov)
    out[0, 0] = 99.0
    assert b.cov[0, 0] == 2.0


def test_information_form_equals_sequential_kf(rng):
    """100 random two-target instances against the standard-form recursion."""
    for _ in range(100):
        robots = [RobotState(*rng.uniform(0, 100, 2), rng.uniform(-np.pi, np.pi)) for _ in range(3)]
        for _ in range(2):
            b = TargetBelief(rng.uniform(0, 100, 2), random_spd(rng))
            contribs = []
            for r in robots:
                H = measurement_jacobian(r, b.mean)
                _, R = measure(r, b.mean)
                contribs.append((H, R))
            info = fused_update_cov(FusedUpdateInput(b, contribs))
            seq = sequential_kf_cov(b.cov, contribs)
            assert np.max(np.abs(info - seq)) <= 1e-8
            assert np.allclose(fused_update_cov(b, contribs[::-1]), info, atol=1e-10)


def test_posterior_mean_single_measurement_matches_ekf_formula(rng):
    for _ in range(20):
        robot = RobotState(*rng.uniform(0, 100, 2), rng.uniform(-3, 3))
        b = TargetBelief(rng.uniform(0, 100, 2), random_spd(rng))
        z_true, R = measure(robot, b.mean + rng.normal(size=2))
        z = (z_true.range + 0.3, z_true.bearing - 0.01)
        H = measurement_jacobian(robot, b.mean)
        h, _ = measure(robot, b.mean)
        _, Rm = measure(robot, b.mean)
        K = b.cov @ H.T @ np.linalg.inv(H @ b.cov @ H.T + Rm)
        innov = np.array([z[0] - h.range, np.angle(np.exp(1j * (z[1] - h.bearing)))])
        assert np.allclose(posterior_mean(b, [(z, robot)]), b.mean + K @ innov, atol=1e-9)


def test_posterior_mean_without_measurements_is_prior():
    b = TargetBelief([4.0, 5.0], np.eye(2))
    assert np.array_equal(posterior_mean(b, []), b.mean)


def test_noise_free_measurements_pull_estimate_toward_truth(rng):
    truth = np.array([50.0, 50.0])
    b = TargetBelief(truth + [3.0, -2.0], 4.0 * np.eye(2))
    robots = [RobotState(40.0, 45.0), RobotState(60.0, 58.0), RobotState(52.0, 35.0)]
    meas = [(measure(r, truth)[0], r) for r in robots]
    est = posterior_mean(b, meas)
    assert np.linalg.norm(est - truth) < np.linalg.norm(b.mean - truth)
