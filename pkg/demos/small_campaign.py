"""
A small Monte-Carlo campaign
============================

The shipped small-scale configuration runs every planner on ten random
scenarios per attack budget. Results go to a CSV file, one row per trial
plus mean and standard deviation rows, and bar charts are rendered from it.
"""

from pathlib import Path

from robust_tracking import emit_plots, run_campaign
from robust_tracking.harness import read_records

config = Path(__file__).resolve().parent.parent / "configs" / "small_scale.yaml"
out = Path("campaign_output")
csv_path = run_campaign(config, out / "results.csv")

records = read_records(csv_path)
print(len(records), "trial rows")

# mean average trace per planner for the first budget
first = [r for r in records if (r["alpha_s"], r["alpha_c"]) == (1, 3)]
for planner in ("opt", "ratt", "nropt", "greedy", "random"):
    vals = [r["avg_trace"] for r in first if r["planner"] == planner]
    print(f"{planner:7s} {sum(vals) / len(vals):.4f}")

for path in emit_plots(csv_path, out / "plots"):
    print("wrote", path)
