"""Monte-Carlo experiment driver: configs, trials, campaigns and CSV output.

A campaign runs every configured planner against every attack mode and
budget on a fresh random scenario per trial. All random draws come from
streams derived from ``(campaign seed, trial id)``, so within a trial every
planner sees the same scenario, target motion and measurement noise, and
reruns (serial or parallel) produce byte-identical CSV files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema
import numpy as np
import yaml

from .adversary import DEFAULT_CAP, bounded_rational_attack, worst_case_attack
from .caa import caa
from .ekf import fused_update_cov, posterior_mean
from .errors import ConfigInvalid, CsvMalformed
from .models import (
    ControlInput,
    SensorNoiseParams,
    measure,
    measurement_jacobian,
    step_target,
    wrap_angle,
)
from .objective import AttackRealization, EvalCounter, TrackingObjective
from .planner import PLANNERS, plan_greedy, plan_nropt, plan_opt, plan_random, plan_ratt
from .scenario import GeneratorSpec, Scenario, default_inputs, generate_scenario

SCHEMA_VERSION = 1
CSV_SCHEMA_VERSION = 1
ATTACK_MODES = ("worst-case", "bounded-rational", "none")

# stream ids mixed into the seed sequence of each trial
_SCENARIO, _NOISE, _PLANNER = 0, 1, 2


@dataclass
class TrialRecord:
    trial: int
    planner: str
    attack_mode: str
    n_robots: int
    n_targets: int
    alpha_s: int
    alpha_c: int
    alpha_cs: int
    blocked_edges: int
    phi: float
    avg_trace: float
    mse: float
    evals: int
    wall_time: float = 0.0


@dataclass
class CampaignConfig:
    generator: GeneratorSpec
    planners: list[str]
    budgets: list[tuple[int, int]]
    attack_modes: list[str] = field(default_factory=lambda: ["worst-case"])
    trials: int = 10
    seed: int = 0
    cap_evals: int = DEFAULT_CAP
    record_wall_time: bool = False


def trial_seed(campaign_seed: int, trial: int, stream: int) -> int:
    return int(np.random.SeedSequence([campaign_seed, trial, stream]).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------- config


def _schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("config_schema.json").read_text())


def _line_of(node: yaml.Node | None, path: Sequence[Any]) -> int | None:
    """1-based line of the YAML node at ``path``, or of its deepest existing parent."""
    line = node.start_mark.line + 1 if node is not None else None
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == str(key)), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
        line = node.start_mark.line + 1
    return line


def parse_config(text: str, source: str = "<config>") -> CampaignConfig:
    """Validate a YAML campaign description and build a :class:`CampaignConfig`."""
    try:
        raw = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise ConfigInvalid(f"{source}: not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigInvalid(f"{source}: top level must be a mapping")

    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.path)))
    if errors:
        lines = []
        for err in errors:
            path = list(err.path)
            where = ".".join(map(str, path)) or "<root>"
            lines.append(f"{source}:{_line_of(root, path)}: field '{where}': {err.message}")
        raise ConfigInvalid("\n".join(lines))

    sc = raw["scenario"]
    for k, (a_s, a_c) in enumerate(raw["budgets"]):
        n = sc["n_robots"]
        if a_s > n or a_c > n * (n - 1) // 2:
            raise ConfigInvalid(
                f"{source}:{_line_of(root, ['budgets', k])}: field 'budgets.{k}': "
                f"budget ({a_s}, {a_c}) exceeds {n} robots / {n * (n - 1) // 2} links"
            )
    inputs = (
        tuple(ControlInput(float(v), float(w)) for v, w in sc["inputs"])
        if "inputs" in sc
        else default_inputs()
    )
    extra = {k: sc[k] for k in ("tau", "sigma_q", "initial_cov", "initial_mean_std") if k in sc}
    for k in ("target_speeds", "target_turn_rates"):
        if k in sc:
            extra[k] = tuple(float(v) for v in sc[k])
    gen = GeneratorSpec(
        n_robots=sc["n_robots"],
        n_targets=sc["n_targets"],
        arena=tuple(float(v) for v in sc.get("arena", (100.0, 100.0))),
        inputs=inputs,
        sensor=SensorNoiseParams(**sc.get("sensor", {})),
        **extra,
    )
    return CampaignConfig(
        generator=gen,
        planners=list(raw["planners"]),
        budgets=[(int(a), int(b)) for a, b in raw["budgets"]],
        attack_modes=list(raw.get("attack_modes", ["worst-case"])),
        trials=int(raw.get("trials", 10)),
        seed=int(raw.get("seed", 0)),
        cap_evals=int(raw.get("cap_evals", DEFAULT_CAP)),
        record_wall_time=bool(raw.get("record_wall_time", False)),
    )


def load_config(path: str | Path) -> CampaignConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigInvalid(f"{path}: cannot read: {exc}") from exc
    return parse_config(text, str(path))


# ---------------------------------------------------------------- trials


def plan(
    obj: TrackingObjective,
    planner: str,
    alpha_s: int,
    alpha_c: int,
    rng: np.random.Generator,
    cap: int = DEFAULT_CAP,
) -> tuple[int, ...]:
    if planner == "ratt":
        return plan_ratt(obj, alpha_s, alpha_c).assignment
    if planner == "opt":
        return plan_opt(obj, alpha_s, alpha_c, cap)
    if planner == "nropt":
        return plan_nropt(obj, cap)
    if planner == "greedy":
        return plan_greedy(obj)
    if planner == "random":
        return plan_random(obj, rng)
    raise ValueError(f"unknown planner {planner!r}")


def realize_attack(
    obj: TrackingObjective,
    assignment: Sequence[int],
    mode: str,
    alpha_s: int,
    alpha_c: int,
    cap: int = DEFAULT_CAP,
) -> AttackRealization:
    if mode == "none":
        return AttackRealization()
    if mode == "worst-case":
        return worst_case_attack(obj, assignment, alpha_s, alpha_c, cap)[0]
    if mode == "bounded-rational":
        return bounded_rational_attack(obj, assignment, alpha_s, alpha_c)
    raise ValueError(f"unknown attack mode {mode!r}")


def run_trial(
    scenario: Scenario | TrackingObjective,
    planner: str,
    attack_mode: str,
    alpha_s: int,
    alpha_c: int,
    noise_seed: int,
    planner_seed: int | None = None,
    cap: int = DEFAULT_CAP,
    trial: int = 0,
) -> TrialRecord:
    """Plan, attack, simulate one step and score the resulting estimate.

    ``noise_seed`` fixes the target process noise and the standard-normal
    measurement noise; calls that share it see identical draws whatever
    the planner. Only the robots that keep their sensing inside the
    best-performing subgroup contribute measurements.
    """
    if isinstance(scenario, TrackingObjective):
        obj = scenario
        obj.counter = EvalCounter()
    else:
        obj = TrackingObjective(scenario)
    sc = obj.scenario
    start = time.perf_counter()

    rng = np.random.default_rng(planner_seed if planner_seed is not None else noise_seed)
    assignment = plan(obj, planner, alpha_s, alpha_c, rng, cap)
    evals = obj.counter.count
    attack = realize_attack(obj, assignment, attack_mode, alpha_s, alpha_c, cap)
    value, _, members = obj.best_subgroup(assignment, attack)
    members = sorted(members)

    noise = np.random.default_rng(noise_seed)
    process = noise.standard_normal((sc.n_targets, 2))
    meas = noise.standard_normal((sc.n_robots, sc.n_targets, 2))

    traces, sq_errors = [], []
    for j, (target, prior) in enumerate(zip(sc.targets, obj.predicted)):
        truth = step_target(target, sc.tau, target.sigma_q * process[j])
        true_pos = truth.position
        zs, contributions = [], []
        for i in members:
            x = obj.next_states[i][assignment[i]]
            h, R = measure(x, true_pos, sc.sensor)
            z = (
                h.range + math.sqrt(R[0, 0]) * meas[i, j, 0],
                wrap_angle(h.bearing + math.sqrt(R[1, 1]) * meas[i, j, 1]),
            )
            zs.append((z, x))
            contributions.append((measurement_jacobian(x, prior.mean), measure(x, prior.mean, sc.sensor)[1]))
        traces.append(float(np.trace(fused_update_cov(prior, contributions))))
        est = posterior_mean(prior, zs, sc.sensor)
        sq_errors.append(float(np.sum((est - np.asarray(true_pos)) ** 2)))

    return TrialRecord(
        trial=trial,
        planner=planner,
        attack_mode=attack_mode,
        n_robots=sc.n_robots,
        n_targets=sc.n_targets,
        alpha_s=alpha_s,
        alpha_c=alpha_c,
        alpha_cs=caa(sc.n_robots, alpha_c).alpha_cs,
        blocked_edges=len(attack.edges),
        phi=value,
        avg_trace=float(np.mean(traces)),
        mse=float(np.mean(sq_errors)),
        evals=evals,
        wall_time=time.perf_counter() - start,
    )


def _campaign_trial(cfg: CampaignConfig, trial: int) -> list[TrialRecord]:
    scenario = generate_scenario(cfg.generator, trial_seed(cfg.seed, trial, _SCENARIO))
    obj = TrackingObjective(scenario)
    noise_seed = trial_seed(cfg.seed, trial, _NOISE)
    planner_seed = trial_seed(cfg.seed, trial, _PLANNER)
    out = []
    for alpha_s, alpha_c in cfg.budgets:
        for mode in cfg.attack_modes:
            for planner in cfg.planners:
                out.append(
                    run_trial(
                        obj, planner, mode, alpha_s, alpha_c, noise_seed, planner_seed,
                        cfg.cap_evals, trial,
                    )
                )
    return out


def run_records(cfg: CampaignConfig, jobs: int = 1) -> list[TrialRecord]:
    if not cfg.planners:
        raise ConfigInvalid("planner list is empty")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_campaign_trial, [cfg] * cfg.trials, range(cfg.trials)))
    else:
        chunks = [_campaign_trial(cfg, t) for t in range(cfg.trials)]
    return [r for chunk in chunks for r in chunk]


# ---------------------------------------------------------------- CSV

KEY_FIELDS = ("planner", "attack_mode", "n_robots", "n_targets", "alpha_s", "alpha_c", "alpha_cs")
METRIC_FIELDS = ("blocked_edges", "phi", "avg_trace", "mse", "evals")


def csv_columns(record_wall_time: bool = False) -> list[str]:
    cols = ["schema_version", "row_type", "stat", "trial", *KEY_FIELDS, *METRIC_FIELDS]
    return cols + ["wall_time"] if record_wall_time else cols


def fmt(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def summarize(records: Sequence[TrialRecord], record_wall_time: bool = False) -> list[dict]:
    """Mean and sample standard deviation per (planner, attack, budget) group."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault(tuple(getattr(r, k) for k in KEY_FIELDS), []).append(r)
    metrics = METRIC_FIELDS + (("wall_time",) if record_wall_time else ())
    rows = []
    for key, group in groups.items():
        for stat in ("mean", "std"):
            row = {"row_type": "summary", "stat": stat, "trial": "", **dict(zip(KEY_FIELDS, key))}
            for m in metrics:
                vals = np.array([getattr(r, m) for r in group], dtype=float)
                if stat == "mean":
                    row[m] = float(np.mean(vals))
                else:
                    row[m] = float(np.std(vals, ddof=1)) if len(vals) > 1 else float("nan")
            rows.append(row)
    return rows


def records_to_csv(records: Sequence[TrialRecord], record_wall_time: bool = False) -> str:
    cols = csv_columns(record_wall_time)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    rows = [{"row_type": "trial", "stat": "", **asdict(r)} for r in records]
    rows += summarize(records, record_wall_time)
    for row in rows:
        row["schema_version"] = CSV_SCHEMA_VERSION
        writer.writerow({k: fmt(row.get(k, "")) for k in cols})
    return buf.getvalue()


def run_campaign(
    config: str | Path | CampaignConfig,
    output_path: str | Path,
    jobs: int = 1,
    seed: int | None = None,
    cap_evals: int | None = None,
) -> Path:
    """Run a campaign and write its CSV (trial rows followed by summary rows)."""
    cfg = config if isinstance(config, CampaignConfig) else load_config(config)
    if seed is not None:
        cfg.seed = seed
    if cap_evals is not None:
        cfg.cap_evals = cap_evals
    records = run_records(cfg, jobs)
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(records_to_csv(records, cfg.record_wall_time))
    return output_path


def read_records(path: str | Path) -> list[dict]:
    """Trial rows of a campaign CSV as dictionaries with numeric fields parsed."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    ints = {"trial", "n_robots", "n_targets", "alpha_s", "alpha_c", "alpha_cs", "blocked_edges", "evals"}
    out = []
    for row in rows:
        if row.get("row_type") != "trial":
            continue
        parsed = dict(row)
        for k in ints & row.keys():
            parsed[k] = int(row[k])
        for k in ("phi", "avg_trace", "mse", "wall_time"):
            if k in row:
                parsed[k] = float(row[k])
        out.append(parsed)
    return out



# ---------------------------------------------------------------- plots

PLOT_METRICS = ("avg_trace", "mse")


def _summary_means(path: Path) -> list[dict]:
    required = {"row_type", "planner", "attack_mode", "alpha_s", "alpha_c", *PLOT_METRICS}
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            rows = list(reader)
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise CsvMalformed(f"{path}: cannot read CSV: {exc}") from exc
    if header is None:
        return []
    missing = required - set(header)
    if missing:
        raise CsvMalformed(f"{path}: missing columns {sorted(missing)}")
    out = []
    for lineno, row in enumerate(rows, start=2):
        if row["row_type"] not in ("trial", "summary"):
            raise CsvMalformed(f"{path}:{lineno}: unknown row_type {row['row_type']!r}")
        try:
            parsed = {
                "row_type": row["row_type"],
                "stat": row.get("stat", ""),
                "planner": row["planner"],
                "attack_mode": row["attack_mode"],
                "alpha_s": int(row["alpha_s"]),
                "alpha_c": int(row["alpha_c"]),
                **{m: float(row[m]) for m in PLOT_METRICS},
            }
        except (TypeError, ValueError) as exc:
            raise CsvMalformed(f"{path}:{lineno}: {exc}") from exc
        out.append(parsed)
    return out


def _group_means(rows: list[dict]) -> dict[tuple, dict[str, dict[str, float]]]:
    """(attack_mode, alpha_s, alpha_c) -> planner -> metric -> mean over trials."""
    trials = [r for r in rows if r["row_type"] == "trial"]
    source = trials if trials else [r for r in rows if r["stat"] == "mean"]
    acc: dict[tuple, dict[str, list[dict]]] = {}
    for r in source:
        key = (r["attack_mode"], r["alpha_s"], r["alpha_c"])
        acc.setdefault(key, {}).setdefault(r["planner"], []).append(r)
    return {
        key: {
            p: {m: float(np.mean([r[m] for r in rs])) for m in PLOT_METRICS}
            for p, rs in per_planner.items()
        }
        for key, per_planner in acc.items()
    }


def emit_plots(csv_path: str | Path, out_dir: str | Path) -> list[Path]:
    """One SVG bar chart per metric and (attack mode, budget), bars grouped by planner."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path, out_dir = Path(csv_path), Path(out_dir)
    rows = _summary_means(csv_path)
    if not rows:
        warnings.warn(f"{csv_path}: no data rows, no plots written", stacklevel=2)
        return []
    out_dir.mkdir(parents=True, exist_ok=True)
    order = {p: k for k, p in enumerate(PLANNERS)}
    written = []
    with matplotlib.rc_context({"svg.hashsalt": "robust-tracking", "svg.fonttype": "none"}):
        for (mode, a_s, a_c), per_planner in sorted(_group_means(rows).items()):
            planners = sorted(per_planner, key=lambda p: (order.get(p, len(order)), p))
            for metric in PLOT_METRICS:
                fig, ax = plt.subplots(figsize=(4.0, 3.0))
                ax.bar(planners, [per_planner[p][metric] for p in planners], color="0.5")
                ax.set_ylabel(f"{metric} [m^2]")
                ax.set_title(f"{mode}, alpha_s={a_s}, alpha_c={a_c}")
                fig.tight_layout()
                path = out_dir / f"{metric}_{mode}_s{a_s}_c{a_c}.svg"
                fig.savefig(path, format="svg", metadata={"Date": None})
                plt.close(fig)
                written.append(path)
    return written
