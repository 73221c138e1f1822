"""Calibration run for the figure curve y^2 + xy = x^3 + 87x + 442.

Prints the constants that the acceptance suite pins: the second-order
residual constant C (fit on 1e3 <= q <= 1e4, checked above), the KS
distances of the two normalized angle statistics at N = 1e4, 1e5, 1e6 with
drop fractions, and the theta_3 mean on [1e5, 1e6].

    python scripts/calibrate.py --cache /tmp/fig_curve.cache
"""

import argparse
import math
import time

from rankzeta.dataio import TraceCache
from rankzeta.ec import CurveQ
from rankzeta.satotate import ks_distance, samples_from_traces, statistic_angles
from rankzeta.traces import ap_table
from rankzeta.zeta import first_order_residual, second_order_residual

FIG_CURVE = CurveQ("2225.fig", (1, 0, 0, 87, 442), conductor=2225, rank=2, cm_flag=False)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--cache")
    ap.add_argument("--pmax", type=int, default=10**6)
    args = ap.parse_args(argv)
    cache = TraceCache(args.cache) if args.cache else None
    t0 = time.time()
    table = ap_table(FIG_CURVE, args.pmax, cache=cache)
    print(f"{len(table)} traces in {time.time() - t0:.1f}s")

    for n in (3, 4, 5):
        worst1 = max(abs(float(first_order_residual(p, a, n))) * math.sqrt(p) for p, a in table if p >= 1000)
        c_lo = max(abs(float(second_order_residual(p, a, n))) * p for p, a in table if 1000 <= p <= 10**4)
        c_hi = max(abs(float(second_order_residual(p, a, n))) * p for p, a in table if p > 10**4)
        print(f"n={n}: max sqrt(q)|R| = {worst1:.4f}; max q|R2| on [1e3,1e4] = {c_lo:.4f}, above = {c_hi:.4f}")

    samples = samples_from_traces(table, 3)
    for stat in ("theta_prime", "theta_dprime"):
        for N in (10**4, 10**5, 10**6):
            sub = [s for s in samples if s.p <= N]
            ang = statistic_angles(sub, stat)
            kept = [x for x in ang if x is not None]
            print(f"{stat} N={N}: ks={ks_distance(kept):.6f} dropped={1 - len(kept) / len(ang):.5f} count={len(kept)}")
    th = [s.theta_n for s in samples if s.p >= 10**5]
    print(f"theta_3 mean on [1e5,1e6]: {math.fsum(th) / len(th):.6f} (pi/2 = {math.pi / 2:.6f})")


if __name__ == "__main__":
    main()
