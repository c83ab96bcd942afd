"""
A convergence study from a JSON config
======================================

The same experiment the ``bseries verify -i`` subcommand runs: a config
names the method, fixture files and step sizes; the result is a CSV of
``h, error, rate``.
"""
import json
import tempfile
from pathlib import Path

from bseries.butcher import RK4
from bseries.fixtures import cubic_oscillator
from bseries.harness import ExperimentConfig, convergence_study, rows_to_csv

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    (tmp / "rk4.json").write_text(json.dumps(RK4.to_json()))
    (tmp / "cubic.json").write_text(json.dumps(cubic_oscillator().to_json()))
    for name, cfg in {
        "rk4, global": {"method": "rk", "tableau": "rk4.json", "field": "cubic.json", "steps": [0.2, 0.1, 0.05], "T": 2.0, "x0": [0.3, 0.2]},
        "grade-6 B-series, one step": {"method": "bseries", "field": "cubic.json", "steps": [0.2, 0.1, 0.05], "T": 1.0, "x0": [0.3, 0.2], "local": True},
        "grade-6 B-series, global": {"method": "bseries", "field": "cubic.json", "steps": [0.2, 0.1, 0.05], "T": 1.0, "x0": [0.3, 0.2]},
    }.items():
        print(f"# {name}")
        print(rows_to_csv(convergence_study(ExperimentConfig.from_json(cfg, base=tmp))))
