from __future__ import annotations

import numpy as np
import pytest

from robust_tracking.models import ControlInput
from robust_tracking.objective import TrackingObjective
from robust_tracking.scenario import GeneratorSpec, generate_scenario

FOUR_INPUTS = tuple(ControlInput(nu, 0.0) for nu in (-3.0, -1.0, 1.0, 3.0))


def small_objective(seed: int, n: int = 4, m: int = 2, inputs=FOUR_INPUTS) -> TrackingObjective:
    spec = GeneratorSpec(n_robots=n, n_targets=m, inputs=inputs)
    return TrackingObjective(generate_scenario(spec, seed))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def obj4() -> TrackingObjective:
    return small_objective(3)
