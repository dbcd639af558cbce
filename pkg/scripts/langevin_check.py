"""Compare a simulated thermal trajectory with its analytic spectrum and cold-damped temperature.

Usage: python scripts/langevin_check.py [seed]
"""

import dataclasses
import math
import sys

import numpy as np

from mgopto import MechanicalOscillator
from mgopto import langevin


def main(seed=0):
    osc = MechanicalOscillator(1e-6, 2 * math.pi, 100.0)
    gamma_m = osc.omega_m / osc.q
    for gain in (0.0, 4 * gamma_m, 9 * gamma_m):
        cfg = langevin.SimConfig(osc, dt=0.01, duration=2e4, seed=seed, feedback_gain=gain)
        traj = langevin.simulate(cfg)
        f, p = langevin.psd_estimate(traj, segments=32)
        band = (f > 0.1) & (f < 5.0)
        err_db = 10 * np.log10(np.mean(p[band] / langevin.analytic_displacement_psd(cfg, f[band])))
        t_eff = langevin.effective_temperature(traj, osc, discard=50 / cfg.gamma_eff)
        t_expected = osc.temperature * gamma_m / cfg.gamma_eff
        print(f"gain {gain / gamma_m:4.1f} gamma_m: T_eff {t_eff:7.2f} K (expected {t_expected:7.2f} K), "
              f"band PSD offset {err_db:+.3f} dB, ring-down rate "
              f"{langevin.ringdown_rate(dataclasses.replace(cfg, x0=1e-9)):.4f}"
              f" /s vs {cfg.gamma_eff:.4f} /s")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
