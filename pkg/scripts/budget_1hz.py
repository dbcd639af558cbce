"""Noise budget of a 1 mg, 1 Hz pendulum read out by a finesse-100 cavity.

Writes the budget as CSV and prints where each noise term dominates.
Usage: python scripts/budget_1hz.py [out.csv]
"""

import dataclasses
import importlib.resources
import math
import sys

import numpy as np

from mgopto import DampingModel, FrequencyGrid
from mgopto import quantum
from mgopto.config import load_config
from mgopto.cli import budget_csv


def main(out=None):
    path = importlib.resources.files("mgopto").joinpath("data/pendulum_1hz.cfg")
    cfg = load_config(str(path))
    system = cfg.system
    qin = quantum.QuantumNoiseInput.from_system(system)
    w_sql = quantum.sql_touching_frequency(qin)
    print(f"SQL touching frequency: {w_sql / (2 * math.pi):.1f} Hz")

    for model in DampingModel:
        s = dataclasses.replace(system, osc=system.osc.replace(damping=model))
        grid = FrequencyGrid.log_hz(1e-3, 1e4, 2000)
        b = quantum.build_budget(s, grid)
        thermal, rad = b.displacement["thermal"], b.displacement["radiation"]
        cross = grid.hz[np.flatnonzero(np.diff(np.sign(thermal - rad)))]
        listed = ", ".join(f"{f:.3g} Hz" for f in cross) or "none"
        print(f"{model.value:9s} damping: thermal = radiation pressure at {listed}")

    text, _ = budget_csv(cfg, 1.0, 1e4, 500, quantum.MECHANISMS)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"budget written to {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
