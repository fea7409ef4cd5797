"""Robust multi-robot active target tracking under sensing and communication attacks."""

from __future__ import annotations

from .adversary import bounded_rational_attack, enumerate_attacks, worst_case_attack
from .caa import CaaResult, caa
from .curvature import (
    BoundCertificate,
    SetFunctionOracle,
    certify_bound,
    certify_theorem1,
    curvature,
    total_curvature,
)
from .ekf import TargetBelief, fused_update_cov, posterior_mean, predict
from .errors import (
    BudgetExceeded,
    CoincidentPose,
    ConfigInvalid,
    CsvMalformed,
    NotMonotone,
    NotSubmodular,
    ScaleExceeded,
    SingularPrior,
    TrackingError,
    ZeroSingleton,
)
from .harness import TrialRecord, emit_plots, load_config, run_campaign, run_trial
from .models import ControlInput, RobotState, SensorNoiseParams, TargetState, measure, step_robot, step_target
from .objective import AttackRealization, TrackingObjective, phi_subset, team_phi
from .planner import PlanResult, plan_greedy, plan_nropt, plan_opt, plan_random, plan_ratt
from .scenario import GeneratorSpec, Scenario, generate_scenario

__version__ = "0.1.0"
