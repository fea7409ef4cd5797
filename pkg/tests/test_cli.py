from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from robust_tracking.cli import main

TINY = """\
schema_version: 1
seed: 5
trials: 2
scenario:
  n_robots: 3
  n_targets: 2
  inputs: [[-1, 0], [1, 0], [3, 0]]
planners: [ratt, opt]
budgets:
  - [1, 1]
"""


@pytest.fixture
def cfg(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text(TINY)
    return p


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_caa_row(capsys):
    assert main(["caa", "--n", "5", "--alpha-c", "7"]) == 0
    (row,) = _rows(capsys.readouterr().out)
    assert (row["n_max"], row["alpha_cs"], row["ebar"]) == ("3", "2", "0 2 4 6 10")


def test_caa_budget_error_exit_2(capsys):
    assert main(["caa", "--n", "3", "--alpha-c", "9"]) == 2
    assert "error" in capsys.readouterr().err


def test_simulate_and_plot(cfg, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
    assert (out / "results.csv").exists()
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["initial_cov"] == 4.0 and meta["seed"] == 5
    capsys.readouterr()
    assert main(["plot", "--csv", str(out / "results.csv"), "--out", str(tmp_path / "plots")]) == 0
    printed = capsys.readouterr().out.split()
    assert len(printed) == 2 and all(p.endswith(".svg") for p in printed)


def test_global_flags_before_or_after_subcommand(cfg, tmp_path):
    main(["--seed", "9", "simulate", "--config", str(cfg), "--out", str(tmp_path / "a")])
    main(["simulate", "--seed", "9", "--config", str(cfg), "--out", str(tmp_path / "b")])
    main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "c")])
    a, b, c = ((tmp_path / d / "results.csv").read_bytes() for d in "abc")
    assert a == b != c


def test_output_directory_from_environment(cfg, tmp_path, monkeypatch):
    monkeypatch.setenv("ROBUST_TRACKING_OUT", str(tmp_path / "env"))
    assert main(["simulate", "--config", str(cfg)]) == 0
    assert (tmp_path / "env" / "results.csv").exists()


def test_missing_output_directory_exit_2(cfg, monkeypatch):
    monkeypatch.delenv("ROBUST_TRACKING_OUT", raising=False)
    assert main(["simulate", "--config", str(cfg)]) == 2


def test_invalid_config_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text(TINY.replace("planners: [ratt, opt]", "planners: []"))
    assert main(["simulate", "--config", str(p), "--out", str(tmp_path)]) == 2
    assert "planners" in capsys.readouterr().err


def test_scale_cap_exit_3(cfg, tmp_path):
    assert main(["--cap-evals", "5", "simulate", "--config", str(cfg), "--out", str(tmp_path)]) == 3


def test_certify_rows(cfg, capsys):
    assert main(["certify", "--config", str(cfg)]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 2
    assert all(r["satisfied"] == "True" for r in rows)


def test_attack_eval_rows(cfg, capsys):
    assert main(["attack-eval", "--config", str(cfg)]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert all(float(r["worst_case"]) <= float(r["bounded_rational"]) + 1e-12 for r in rows)


def test_malformed_csv_exit_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert main(["plot", "--csv", str(bad), "--out", str(tmp_path / "p")]) == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "robust_tracking.cli", "caa", "--n", "4", "--alpha-c", "4"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.splitlines()[1].startswith("4,4,2,2,")
