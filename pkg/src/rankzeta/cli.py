"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 invariant violation, 3 I/O error.
"""

import argparse
import math
import sys
import time
from pathlib import Path

from . import dataio, murmuration, satotate, zeta
from .ec import BadReductionError, CurveQ, reduce
from .primes import is_prime, sieve
from .traces import ap_table, trace_of_frobenius, trace_prime_power
from .satotate import prime_power_traces

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _g(v) -> str:
    return format(float(v), ".12g")


def _range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")
    return int(lo), int(hi)


def _ranks(text: str):
    return [int(r) for r in text.split(",") if r.strip()]


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(msg: str):
    print(msg, file=sys.stderr)


def resolve_curve(args) -> CurveQ:
    ds = dataio.parse_curve_csv(args.input) if args.input else None
    if args.curve:
        spec = args.curve.strip()
        if spec.startswith("[") or "," in spec:
            return dataio.parse_curve_spec(spec)
        if ds is None:
            raise UsageError(f"curve label {spec!r} needs --input <csv>")
        try:
            return ds.by_label(spec)
        except KeyError:
            raise UsageError(f"label {spec!r} not found in {args.input}") from None
    if ds is not None and len(ds) == 1:
        return ds.curves[0]
    raise UsageError("give --curve (CSV row, [a1,a2,a3,a4,a6] or label with --input)")


def _cache(args):
    return dataio.TraceCache(args.cache) if args.cache else None


def _check_pmax(pmax):
    if pmax < 2:
        raise UsageError("--pmax must be >= 2")


def cmd_ap(args) -> int:
    curve = resolve_curve(args)
    _check_pmax(args.pmax)
    table = ap_table(curve, args.pmax, cache=_cache(args), workers=args.threads)
    if args.include_prime_powers:
        lines = ["q,a"] + [f"{q},{a}" for q, a in prime_power_traces(table, args.pmax)]
    else:
        lines = ["p,a"] + [f"{p},{a}" for p, a in table]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def zeta_report(q: int, a: int, n: int):
    """Human-readable text, CSV text, and overall pass flag for (q, a, n)."""
    bs = zeta.beta_sequence(q, a, n)
    text = [f"q = {q}, a = {a}, n = {n}"]
    text.append("beta: " + ", ".join(f"beta_{k} = {b}" for k, b in enumerate(bs.values)))
    rows = ["k,Q,beta,a_k,a_k_float,alpha,rh,sharp_bounds,ratio_bounds"]
    ok = True
    for k in range(1, n + 1):
        a_k = zeta.rank_a_via_beta(bs, k)
        if a_k != zeta.rank_a_recursive(q, a, k):
            ok = False
            text.append(f"  path mismatch at k = {k}")
        rep = zeta.check_rank_rh(q, a, k)
        ok = ok and rep.ok
        rows.append(
            f"{k},{q**k},{bs[k]},{a_k},{_g(a_k)},{bs[k - 1]},"
            f"{int(rep.rh)},{int(rep.sharp_bounds)},{int(rep.ratio_bounds)}"
        )
    P = zeta.zeta_polynomial(q, a, n)
    rep = zeta.check_rank_rh(q, a, n)
    text.append(f"a_{n} = {P.a_n} ~ {_g(P.a_n)}")
    text.append(f"P_{n}(T) = {P}")
    text.append(f"functional equation: {'ok' if P.reflected() == P.coefficients else 'FAIL'}")
    text.append(f"RH (a_n^2 <= 4Q): {'pass' if rep.rh else 'FAIL'}")
    if n >= 2:
        text.append(f"2 > a_n > -2 sqrt(Q): {'pass' if rep.sharp_bounds else 'FAIL'}")
        text.append(f"1 < beta_n/beta_(n-1) < (sqrt(Q)+1)/(sqrt(Q)-1): {'pass' if rep.ratio_bounds else 'FAIL'}")
    ok = ok and P.reflected() == P.coefficients
    return "\n".join(text) + "\n", "\n".join(rows) + "\n", ok


def cmd_zeta(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.p is None:
        raise UsageError("zeta needs --p")
    if args.a is not None:
        q, a = args.p, args.a
        if q < 2:
            raise UsageError("--p must be >= 2")
    else:
        if not is_prime(args.p):
            raise UsageError("--p must be prime when the trace comes from a curve")
        curve = resolve_curve(args)
        rc = reduce(curve, args.p)
        if not rc.good:
            raise UsageError(f"{curve.label} has bad reduction at p = {args.p}")
        q, a = args.p, trace_of_frobenius(rc)
    if a * a > 4 * q:
        raise UsageError(f"a = {a} violates a^2 <= 4q at q = {q}")
    text, table, ok = zeta_report(q, a, args.n)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
    return EXIT_OK if ok else EXIT_INVARIANT


def _cm_notice(curve: CurveQ):
    if curve.cm_flag:
        _note(f"warning: {curve.label} is flagged CM; the rank-n Sato-Tate laws assume a non-CM curve")
    elif curve.cm_flag is None:
        _note(f"notice: CM status of {curve.label} unknown; assuming non-CM")


def cmd_satotate(args) -> int:
    curve = resolve_curve(args)
    _check_pmax(args.pmax)
    n = args.n
    stat = args.statistic
    need = 3 if stat in ("theta_prime", "theta_dprime") else 2
    if n < need:
        raise UsageError(f"statistic {stat} needs n >= {need}")
    if args.bins < 1:
        raise UsageError("--bins must be >= 1")
    _cm_notice(curve)
    if args.pmax > 10**6:
        _note(f"note: p_max = {args.pmax} takes a while (roughly 0.4 ms per prime)")
    samples = satotate.collect_samples(
        curve, n, args.pmax, cache=_cache(args), include_prime_powers=args.include_prime_powers, workers=args.threads
    )
    angles = satotate.statistic_angles(samples, stat)
    hist = satotate.empirical_histogram(angles, args.bins)
    if hist.empty:
        _note("error: no retained samples")
        return EXIT_USAGE
    ks = satotate.ks_distance(angles)
    _note(f"{stat}: n={n} samples={hist.total} retained={hist.retained} dropped={hist.dropped} ks={_g(ks)}")
    if args.format == "svg":
        from .svg import histogram_svg

        xs = [math.pi * k / 200 for k in range(201)]
        overlay = [(x, float(satotate.st_density(x))) for x in xs]
        text = histogram_svg(hist.bin_edges, hist.density, overlay, title=f"{curve.label}: {stat}, n={n}, p<={args.pmax}")
    else:
        text = satotate.histogram_csv(hist)
    _emit(text, args.out)
    return EXIT_OK


def _load_curves(args, rank, lo, hi):
    if args.input:
        return dataio.parse_curve_csv(args.input).curves
    snapshot = Path(args.out).with_suffix(f".r{rank}.curves.csv") if args.out else None
    return dataio.fetch_curves(rank, lo, hi, online=args.online, snapshot=snapshot).curves


def cmd_murmurate(args) -> int:
    lo, hi = args.conductor
    i_lo, i_hi = args.indices
    n, variant = args.n, args.variant
    if variant == "new" and n < 3:
        raise UsageError("variant 'new' needs n >= 3")
    if n < 1:
        raise UsageError("--n must be >= 1")
    if not 1 <= i_lo <= i_hi:
        raise UsageError("--indices must satisfy 1 <= lo <= hi")
    if not args.input and not args.online:
        raise UsageError("murmurate needs --input <csv> (or --online to query the curve database)")
    results = {}
    for r in args.rank:
        curves = _load_curves(args, r, lo, hi)
        fam = murmuration.build_family(curves, murmuration.FamilySpec(r, lo, hi, dedup=not args.no_dedup))
        if fam.empty:
            _note(f"error: empty family for rank {r}, conductor [{lo}, {hi}]")
            return EXIT_USAGE
        _note(f"rank {r}: {len(fam)} curves")
        results[r] = murmuration.series(fam, i_lo, i_hi, n, variant)
    if args.format == "svg":
        from .svg import scatter_svg

        pts = {f"r={r}": [(i, v) for i, _, v in s.points] for r, s in results.items()}
        _emit(scatter_svg(pts, title=f"{variant} functional, n={n}, N in [{lo}, {hi}]"), args.out)
    elif len(results) == 1:
        _emit(next(iter(results.values())).to_csv(), args.out)
    elif args.out:
        out = Path(args.out)
        for r, s in results.items():
            out.with_name(f"{out.stem}_r{r}{out.suffix}").write_text(s.to_csv(), encoding="utf-8")
    else:
        sys.stdout.write("".join(f"# rank={r}\n" + s.to_csv() for r, s in results.items()))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.a is not None:
        q = args.q
        if q is None:
            raise UsageError("--a needs --q")
        if args.a * args.a > 4 * q:
            raise UsageError(f"a = {args.a} violates a^2 <= 4q at q = {q}")
        cases = [(q, args.a)]
    else:
        qmax = args.q or args.qmax
        cases = [(int(q), a) for q in sieve(qmax) for a in range(-math.isqrt(4 * int(q)), math.isqrt(4 * int(q)) + 1)]
    t0 = time.time()
    failures = 0
    checked = 0
    for q, a in cases:
        bs = zeta.beta_sequence(q, a, args.nmax)
        for n in range(args.nmin, args.nmax + 1):
            checked += 1
            if zeta.rank_a_via_beta(bs, n) != zeta.rank_a_recursive(q, a, n):
                failures += 1
                _note(f"path mismatch q={q} a={a} n={n}")
                continue
            rep = zeta.check_rank_rh(q, a, n)
            if not rep.ok:
                failures += 1
                _note(f"bound failure q={q} a={a} n={n}: {rep.failures()}")
            if n == 2 and rep.a_n != 1 + a - q:
                failures += 1
                _note(f"a_2 identity fails q={q} a={a}")
    status = "pass" if failures == 0 else "FAIL"
    print(f"verify: {checked} (q, a, n) cases, {failures} failures, {time.time() - t0:.1f}s: {status}")
    return EXIT_OK if failures == 0 else EXIT_INVARIANT


def build_parser():
    ap = _Parser(prog="rankzeta", description="Rank-n zeta invariants of elliptic curves, Sato-Tate statistics and murmurations.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, pmax):
        p.add_argument("--curve", help="CSV row, [a1,a2,a3,a4,a6], or a label from --input")
        p.add_argument("--input", help="curve CSV file")
        p.add_argument("--cache", help="a_p cache file (label,q,a)")
        p.add_argument("--pmax", type=int, default=pmax)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--include-prime-powers", action="store_true")

    p = sub.add_parser("ap", help="table of a_p over good primes")
    common(p, 10**5)
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("zeta", help="rank-n zeta data at one prime")
    p.add_argument("--curve")
    p.add_argument("--input")
    p.add_argument("--p", type=int, help="prime (or prime power with --a)")
    p.add_argument("--a", type=int, help="use this trace instead of a curve")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--out", help="write the CSV report here")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("satotate", help="angle histogram and KS distance")
    common(p, 10**6)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--statistic", choices=satotate.STATISTICS, default="theta_prime")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.set_defaults(func=cmd_satotate)

    p = sub.add_parser("murmurate", help="family-averaged murmuration series")
    p.add_argument("--input", help="curve CSV file")
    p.add_argument("--online", action="store_true", help="query the curve database instead of --input")
    p.add_argument("--rank", type=_ranks, default=[0])
    p.add_argument("--conductor", type=_range, default=(7500, 10000), help="lo..hi (closed)")
    p.add_argument("--indices", type=_range, default=(1, 1000), help="prime index range lo..hi")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--variant", choices=murmuration.VARIANTS, default="new")
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_murmurate)

    p = sub.add_parser("verify", help="exact sweep of path equality and bounds")
    p.add_argument("--qmax", type=int, default=1000)
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--q", type=int)
    p.add_argument("--a", type=int)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, dataio.DataFormatError, dataio.OfflineError, BadReductionError, ValueError) as e:
        _note(f"error: {e}")
        return EXIT_USAGE
    except zeta.InvariantViolation as e:
        _note(f"invariant violation: {e}")
        return EXIT_INVARIANT
    except OSError as e:
        _note(f"I/O error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
