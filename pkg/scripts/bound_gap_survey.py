"""How tight is the worst-case-interference outage bound across random drops?

For each drop the bound-minus-exact gap is maximised over the outage grid
(alpha in {0.6, 0.7, 0.8}, p_C from -10 to 30 dBm) with lam = 0.1, beta = 1,
P_S = 23 dBm, theta = -92 dBm and unit target rates.

    python scripts/bound_gap_survey.py [--drops 500] [--seed 0]
"""
import argparse
import math

import numpy as np

from fdd2d import analysis
from fdd2d.model import PowerAllocation, QosTargets
from fdd2d.scenario import CellLayout, RadioConfig, build_params, random_drop, reference_geometry
from fdd2d.units import dbm_to_mw

ALPHAS = (0.6, 0.7, 0.8)
PCS = np.linspace(-10.0, 30.0, 20)
T = QosTargets(1.0, 1.0)
RADIO = RadioConfig(lam=0.1, beta=1.0, P_S_dBm=23.0, P_C_dBm=30.0, theta_dBm=-92.0)


def max_gap(params) -> float:
    g = 0.0
    for a in ALPHAS:
        for pc in PCS:
            alloc = PowerAllocation(a, float(dbm_to_mw(pc)))
            g = max(g, analysis.outage_upper_bound(params, alloc, T)
                    - analysis.outage_exact(params, alloc, T).p_out)
    return g


def main():
    ap = argparse.ArgumentParser(description="bound tightness survey")
    ap.add_argument("--drops", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ref = max_gap(build_params(reference_geometry(), RADIO))
    print(f"reference geometry: max gap {ref:.3e}")
    gaps, d_sb = [], []
    for k in range(args.drops):
        geom = random_drop(CellLayout(), args.seed + k)
        gaps.append(max_gap(build_params(geom, RADIO)))
        d_sb.append(math.hypot(*geom.S))
    gaps, d_sb = np.array(gaps), np.array(d_sb)
    q = np.quantile(gaps, [0.0, 0.1, 0.5, 0.9, 1.0])
    print("random drops: min {:.3e}  p10 {:.3e}  median {:.3e}  p90 {:.3e}  max {:.3e}".format(*q))
    print(f"drops with gap <= 1e-3: {np.count_nonzero(gaps <= 1e-3)}/{len(gaps)}")
    for lo, hi in ((30, 80), (80, 130), (130, 200)):
        m = (d_sb >= lo) & (d_sb < hi)
        if m.any():
            print(f"DT {lo}-{hi} m from the BS: median gap {np.median(gaps[m]):.3e} ({m.sum()} drops)")


if __name__ == "__main__":
    main()
