"""Command-line entry point: ``robust-tracking <subcommand> ...``.

Exit status is 0 on success, 2 for invalid configs, budgets or CSV input,
and 3 when an exhaustive computation would exceed the evaluation cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, fields
from pathlib import Path
from typing import Sequence

from .adversary import bounded_rational_attack, worst_case_attack
from .caa import CaaResult, caa
from .curvature import BoundCertificate, certify_bound
from .errors import BudgetExceeded, ConfigInvalid, CsvMalformed, ScaleExceeded
from .harness import (
    _PLANNER,
    _SCENARIO,
    CampaignConfig,
    emit_plots,
    fmt,
    load_config,
    plan,
    run_campaign,
    trial_seed,
)
from .objective import TrackingObjective
from .scenario import generate_scenario

OUT_ENV = "ROBUST_TRACKING_OUT"


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _apply_globals(cfg: CampaignConfig, args: argparse.Namespace) -> CampaignConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    if args.cap_evals is not None:
        cfg.cap_evals = args.cap_evals
    return cfg


def cmd_simulate(args: argparse.Namespace) -> int:
    out = args.out or os.environ.get(OUT_ENV)
    if not out:
        raise ConfigInvalid(f"no output directory: pass --out or set {OUT_ENV}")
    cfg = _apply_globals(load_config(args.config), args)
    out_dir = Path(out)
    path = run_campaign(cfg, out_dir / "results.csv", jobs=args.jobs)
    meta = {
        "config": str(args.config),
        "seed": cfg.seed,
        "trials": cfg.trials,
        "initial_cov": cfg.generator.initial_cov,
        "initial_mean_std": cfg.generator.initial_mean_std,
        "sigma_q": cfg.generator.sigma_q,
        "csv": path.name,
    }
    (out_dir / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(path)
    return 0


def cmd_caa(args: argparse.Namespace) -> int:
    result = caa(args.n, args.alpha_c)
    w = _writer()
    w.writerow([f.name for f in fields(CaaResult)])
    w.writerow([" ".join(map(str, v)) if isinstance(v, tuple) else v for v in asdict(result).values()])
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    cfg = _apply_globals(load_config(args.config), args)
    w = _writer()
    w.writerow(["trial", "alpha_s", "alpha_c", *(f.name for f in fields(BoundCertificate))])
    for trial in range(cfg.trials):
        obj = TrackingObjective(generate_scenario(cfg.generator, trial_seed(cfg.seed, trial, _SCENARIO)))
        for a_s, a_c in cfg.budgets:
            cert = certify_bound(obj, a_s, a_c, cap=cfg.cap_evals)
            w.writerow([trial, a_s, a_c, *(fmt(v) for v in asdict(cert).values())])
    return 0


def cmd_attack_eval(args: argparse.Namespace) -> int:
    import numpy as np

    cfg = _apply_globals(load_config(args.config), args)
    w = _writer()
    w.writerow(
        ["trial", "planner", "alpha_s", "alpha_c", "worst_case", "bounded_rational", "br_blocked_edges"]
    )
    for trial in range(cfg.trials):
        obj = TrackingObjective(generate_scenario(cfg.generator, trial_seed(cfg.seed, trial, _SCENARIO)))
        for a_s, a_c in cfg.budgets:
            for name in cfg.planners:
                rng = np.random.default_rng(trial_seed(cfg.seed, trial, _PLANNER))
                assignment = plan(obj, name, a_s, a_c, rng, cfg.cap_evals)
                _, worst = worst_case_attack(obj, assignment, a_s, a_c, cfg.cap_evals)
                br = bounded_rational_attack(obj, assignment, a_s, a_c)
                w.writerow(
                    [trial, name, a_s, a_c, fmt(worst), fmt(obj.team(assignment, br)), len(br.edges)]
                )
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    out = args.out or os.environ.get(OUT_ENV)
    if not out:
        raise ConfigInvalid(f"no output directory: pass --out or set {OUT_ENV}")
    for path in emit_plots(args.csv, out):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="override the campaign seed")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument(
        "--cap-evals", type=int, default=argparse.SUPPRESS, help="cap on exhaustive evaluations"
    )

    parser = argparse.ArgumentParser(
        prog="robust-tracking", description=__doc__.splitlines()[0], parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="run a Monte-Carlo campaign to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help=f"output directory (default: ${OUT_ENV})")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("caa", parents=[common], help="convert a link-attack budget")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha-c", type=int, required=True)
    p.set_defaults(func=cmd_caa)

    p = sub.add_parser("certify", parents=[common], help="check the approximation bound per instance")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("attack-eval", parents=[common], help="compare worst-case and heuristic attacks")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_attack_eval)

    p = sub.add_parser("plot", parents=[common], help="render bar charts from a campaign CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--out", help=f"output directory (default: ${OUT_ENV})")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("seed", None), ("jobs", 1), ("cap_evals", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except (ConfigInvalid, BudgetExceeded, CsvMalformed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScaleExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
