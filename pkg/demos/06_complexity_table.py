"""A small version of the complexity comparison, through the experiment API.

The command-line equivalent is

    blocktri-ldpc --ensemble e8 --n 1000 --trials 10 --verify

Run: python demos/06_complexity_table.py
"""
from blocktri_ldpc.cli import ExperimentConfig, emit_scatter, format_scatter, run_experiment

for ensemble in ("e8", "e2"):
    report = run_experiment(ExperimentConfig(ensemble=ensemble, n=[1000], trials=10, seed=1, verify=True))
    print(f"{ensemble}, n=1000, 10 trials")
    for row in report:
        if row.trial == "avg":
            print(f"  {row.algorithm:12s} mu={row.mu:9.2f}  alpha={row.alpha:9.2f}")
    if ensemble == "e8":
        pts = emit_scatter(report, ("ru", "blocktri"), "mu")
        print(format_scatter(pts, ("ru", "blocktri"), "mu"))
