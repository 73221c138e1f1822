"""Sato-Tate histograms for the figure curve and murmuration series for the
fixture families, as CSV + SVG under --outdir.

    python scripts/make_figures.py --outdir figures --pmax 1000000
"""

import argparse
from pathlib import Path

from rankzeta.cli import main as cli

FIG = "2225.fig,,2225,2,1,0,0,87,442,false"
FAMILY = Path(__file__).resolve().parents[1] / "tests" / "data" / "family_7500_10000.csv"


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--pmax", type=int, default=10**6)
    ap.add_argument("--cache", default=None)
    args = ap.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    cache = ["--cache", args.cache] if args.cache else []
    for stat in ("theta_prime", "theta_dprime"):
        for fmt in ("csv", "svg"):
            cli(["satotate", "--curve", FIG, "--n", "3", "--statistic", stat, "--pmax", str(args.pmax),
                 "--bins", "60", "--format", fmt, "--out", str(out / f"satotate_{stat}.{fmt}"), *cache])
    for ranks, tag in (("0,1", "r01"), ("0,2", "r02")):
        for fmt in ("csv", "svg"):
            cli(["murmurate", "--input", str(FAMILY), "--rank", ranks, "--n", "5", "--variant", "new",
                 "--indices", "1..1000", "--format", fmt, "--out", str(out / f"murmuration_{tag}.{fmt}")])


if __name__ == "__main__":
    main()
