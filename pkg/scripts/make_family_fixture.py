"""Build a curve CSV of elliptic curves with conductor in a window.

No curve database is reachable offline, so this searches reduced models
y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with |a4| <= A4, |a6| <= A6,
keeps those whose discriminant is supported on primes <= N2 (a necessary
condition for conductor <= N2), and asks PARI for the minimal model,
conductor, analytic rank and isogeny class. The result is a sample of each
family, not the complete family a database would give.

Labels are local: ``<N>.<class letters><k>`` with classes lettered in order
of their sorted minimal models and k the position of the model inside its
class. They are NOT Cremona or LMFDB labels.

Requires cypari (``pip install cypari``); the package itself does not.

    python scripts/make_family_fixture.py --lo 7500 --hi 10000 --a4 400 --a6 4000 \
        --out tests/data/family_7500_10000.csv
    python scripts/make_family_fixture.py --lo 11 --hi 50 --a4 60 --a6 300 --ranks 0 --json \
        --out tests/data/api_rank0_11_50.json
"""

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from rankzeta.dataio import write_curve_csv
from rankzeta.ec import CurveQ, c_invariants, discriminant_of
from rankzeta.primes import sieve

CM_J = {0, 1728, -3375, 8000, -32768, 54000, 287496, -884736, -12288000, 16581375,
        -884736000, -147197952000, -262537412640768000}


def smooth_enough(disc: int, primorial: int, bound: int) -> bool:
    """True if every prime of disc is <= bound and the odd part >= 5 of its radical is <= bound."""
    d = abs(disc)
    g = math.gcd(d, primorial)
    rad = g
    while True:
        h = math.gcd(d, g)
        if h == 1:
            break
        d //= h
    if d != 1:
        return False
    while rad % 2 == 0:
        rad //= 2
    while rad % 3 == 0:
        rad //= 3
    return rad <= bound


def letters(k: int) -> str:
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = chr(ord("a") + r) + s
    return s


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--lo", type=int, default=7500)
    ap.add_argument("--hi", type=int, default=10000)
    ap.add_argument("--a4", type=int, default=400)
    ap.add_argument("--a6", type=int, default=4000)
    ap.add_argument("--ranks", default="0,1,2")
    ap.add_argument("--out", required=True)
    ap.add_argument("--json", action="store_true", help="write an ec_curvedata-shaped JSON body instead of CSV")
    args = ap.parse_args(argv)

    from cypari import pari

    pari.allocatemem(512 * 10**6)

    ranks = {int(r) for r in args.ranks.split(",")}
    primorial = math.prod(int(p) for p in sieve(args.hi))
    t0 = time.time()
    candidates = set()
    for a1 in (0, 1):
        for a2 in (-1, 0, 1):
            for a3 in (0, 1):
                for a4 in range(-args.a4, args.a4 + 1):
                    for a6 in range(-args.a6, args.a6 + 1):
                        c = (a1, a2, a3, a4, a6)
                        d = discriminant_of(c)
                        if d and smooth_enough(d, primorial, args.hi):
                            candidates.add(c)
    print(f"{len(candidates)} smooth models in {time.time() - t0:.0f}s", file=sys.stderr)

    classes = {}
    seen_models = set()
    for c in sorted(candidates):
        E = pari.ellinit(list(c))
        N = int(pari.ellglobalred(E)[0])
        if not args.lo <= N <= args.hi:
            continue
        m = tuple(int(v) for v in pari(f"ellinit(ellminimalmodel(ellinit({list(c)})))[1..5]"))
        if m in seen_models:
            continue
        iso = pari(f"my(L=ellisomat(ellinit({list(m)}))[1]); vector(#L,k,ellinit(ellminimalmodel(ellinit(L[k][1])))[1..5])")
        members = tuple(sorted(tuple(int(v) for v in e) for e in iso))
        seen_models.update(members)
        rank = int(pari.ellanalyticrank(pari.ellinit(list(m)))[0])
        if rank not in ranks:
            continue
        c4, _ = c_invariants(m)
        j = Fraction(c4**3, discriminant_of(m))
        cm = j.denominator == 1 and int(j) in CM_J
        found = sorted({m} | {e for e in members if e in candidates})
        classes[members] = (N, rank, cm, found)
    print(f"{len(classes)} isogeny classes after {time.time() - t0:.0f}s", file=sys.stderr)

    by_cond = {}
    for members, (N, rank, cm, found) in classes.items():
        by_cond.setdefault(N, []).append((members, rank, cm, found))
    curves = []
    for N in sorted(by_cond):
        for k, (members, rank, cm, found) in enumerate(sorted(by_cond[N])):
            iso = f"{N}.{letters(k)}"
            for m in found:
                label = f"{iso}{members.index(m) + 1}"
                curves.append(CurveQ(label, m, isogeny_class=iso, conductor=N, rank=rank, cm_flag=cm))
    if args.json:
        recs = [
            {"lmfdb_label": c.label, "lmfdb_iso": c.isogeny_class, "conductor": c.conductor,
             "rank": c.rank, "ainvs": list(c.coeffs), "cm": -3 if c.cm_flag else 0}
            for c in curves
        ]
        with open(args.out, "w") as fh:
            json.dump({"data": recs}, fh, indent=1)
            fh.write("\n")
    else:
        write_curve_csv(curves, args.out)
    counts = {}
    for c in curves:
        counts[c.rank] = counts.get(c.rank, 0) + 1
    print(f"wrote {len(curves)} curves {counts} to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
