"""Best single-wire pendulum Q against the violin-mode floor, for silica and tungsten.

Usage: python scripts/design_scan.py [mass_kg]
"""

import sys

import numpy as np

from mgopto.errors import DesignError
from mgopto.suspension import FUSED_SILICA, TUNGSTEN, DesignConstraints, max_q_design


def main(mass=1e-6):
    print(f"mass {mass:g} kg, safety factor 3")
    print(f"{'f_v_min [Hz]':>12} {'material':>9} {'r_w [um]':>9} {'l_w [mm]':>9} {'Q_pend':>10}")
    for f_v in np.geomspace(10, 1000, 5):
        for mat in (FUSED_SILICA, TUNGSTEN):
            try:
                d = max_q_design(mass, mat, DesignConstraints(f_v_min=f_v))
            except DesignError as e:
                print(f"{f_v:12.4g} {mat.name:>9}  infeasible: {e}")
                continue
            s = d.suspension
            print(f"{f_v:12.4g} {mat.name:>9} {s.r_w * 1e6:9.3f} {s.l_w * 1e3:9.2f} {d.q_pend:10.3e}")


if __name__ == "__main__":
    main(float(sys.argv[1]) if len(sys.argv) > 1 else 1e-6)
