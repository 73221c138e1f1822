"""Rank-stratified curve families and their murmuration averages.

Per-curve terms are exact rationals; each is rounded once to float and the
family average is taken with ``math.fsum``, which is exactly rounded and so
independent of summation order.
"""

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ec import CurveQ
from .primes import first_primes, nth_prime
from .traces import family_traces
from .zeta import rank_a_recursive

VARIANTS = ("classic", "new")


@dataclass(frozen=True)
class FamilySpec:
    rank: int
    conductor_lo: int
    conductor_hi: int
    dedup: bool = True

    def __post_init__(self):
        if not 1 <= self.conductor_lo <= self.conductor_hi:
            raise ValueError(f"need 1 <= N1 <= N2, got [{self.conductor_lo}, {self.conductor_hi}]")
        if self.rank < 0:
            raise ValueError("rank must be >= 0")

    def __contains__(self, curve: CurveQ) -> bool:
        return curve.rank == self.rank and self.conductor_lo <= curve.conductor <= self.conductor_hi


@dataclass
class Family:
    spec: FamilySpec
    curves: List[CurveQ]

    @property
    def empty(self) -> bool:
        return not self.curves

    def __len__(self):
        return len(self.curves)


def build_family(curves: Sequence[CurveQ], spec: FamilySpec) -> Family:
    """Curves of the given rank with conductor in [N1, N2]; with dedup, the
    lexicographically smallest label stands for its isogeny class."""
    chosen = [c for c in curves if c in spec]
    if spec.dedup:
        reps: Dict[str, CurveQ] = {}
        for c in chosen:
            key = c.isogeny_class or c.label
            if key not in reps or c.label < reps[key].label:
                reps[key] = c
        chosen = list(reps.values())
    chosen.sort(key=lambda c: c.label)
    if not chosen:
        warnings.warn(f"empty family for {spec}", RuntimeWarning, stacklevel=2)
    return Family(spec, chosen)


@lru_cache(maxsize=1 << 18)
def classic_term(p: int, a: int, n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Fraction(a)
    a_n = rank_a_recursive(p, a, n)
    if n == 2:
        return a_n + p - 1
    return (a_n + (n - 1) * p + n - 5) / (n - 1)


@lru_cache(maxsize=1 << 18)
def new_term(p: int, a: int, n: int) -> Fraction:
    if n < 3:
        raise ValueError("the new functional needs n >= 3")
    a_n = rank_a_recursive(p, a, n)
    return (a_n + (n - 1) * p - (n - 1) * a + (n - 5)) * Fraction(-p, 3)


def _term(variant):
    if variant == "classic":
        return classic_term
    if variant == "new":
        return new_term
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _average(p: int, traces, n: int, variant: str) -> Optional[float]:
    term = _term(variant)
    if len(traces) == 0:
        return None
    counts = Counter(int(a) for a in traces)
    vals = {a: float(term(p, a, n)) for a in counts}
    return math.fsum(vals[int(a)] for a in traces) / len(traces)


def _check(family: Family, n: int, variant: str):
    if family.empty:
        raise ValueError("family is empty")
    if n < 1 or (variant == "new" and n < 3):
        raise ValueError(f"n={n} not allowed for variant {variant!r}")


def f_at(family: Family, i: int, n: int, variant: str = "classic") -> Optional[float]:
    """Family average at the i-th prime; None if every curve is bad there."""
    _check(family, n, variant)
    p = nth_prime(i)
    traces, good = family_traces(family.curves, [p])
    return _average(p, traces[good[:, 0], 0], n, variant)


def f_classic(family: Family, i: int, n: int) -> Optional[float]:
    return f_at(family, i, n, "classic")


def f_new(family: Family, i: int, n: int) -> Optional[float]:
    return f_at(family, i, n, "new")


@dataclass
class MurmurationSeries:
    n: int
    variant: str
    points: List[Tuple[int, int, float]] = field(default_factory=list)

    @property
    def indices(self):
        return [i for i, _, _ in self.points]

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, _, v in self.points])

    def as_dict(self) -> Dict[int, float]:
        return {i: v for i, _, v in self.points}

    def to_csv(self) -> str:
        lines = ["i,p,value"]
        lines += [f"{i},{p},{format(v, '.12g')}" for i, p, v in self.points]
        return "\n".join(lines) + "\n"


def read_series_csv(text: str, n: int = 0, variant: str = "") -> MurmurationSeries:
    lines = text.splitlines()
    if not lines or lines[0] != "i,p,value":
        raise ValueError("not a series CSV")
    pts = []
    for line in lines[1:]:
        if line:
            i, p, v = line.split(",")
            pts.append((int(i), int(p), float(v)))
    return MurmurationSeries(n, variant, pts)


class FamilyTraces:
    """a_p of every family member at p_1..p_imax, computed once per prime."""

    def __init__(self, family: Family, i_max: int):
        self.family = family
        self.primes = first_primes(i_max)
        self.traces, self.good = family_traces(family.curves, self.primes)

    def at(self, i: int):
        j = i - 1
        return self.primes[j], self.traces[self.good[:, j], j]


def series(family: Family, i_lo: int, i_hi: int, n: int, variant: str = "classic", traces: FamilyTraces = None) -> MurmurationSeries:
    if not 1 <= i_lo <= i_hi:
        raise ValueError(f"need 1 <= i_lo <= i_hi, got ({i_lo}, {i_hi})")
    _check(family, n, variant)
    if traces is None or len(traces.primes) < i_hi:
        traces = FamilyTraces(family, i_hi)
    out = MurmurationSeries(n, variant)
    for i in range(i_lo, i_hi + 1):
        p, a = traces.at(i)
        v = _average(p, a, n, variant)
        if v is not None:
            out.points.append((i, p, v))
    return out


def block_means(s: MurmurationSeries, block: int) -> List[float]:
    """Means over consecutive index blocks [1..block], [block+1..2 block], ..."""
    groups: Dict[int, List[float]] = {}
    for i, _, v in s.points:
        groups.setdefault((i - 1) // block, []).append(v)
    return [math.fsum(groups[k]) / len(groups[k]) for k in sorted(groups)]
