"""Normalized angle statistics of rank-n invariants and their comparison with
the Sato-Tate measure (2/pi) sin^2(theta) d(theta) on [0, pi].
"""

import math
import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .ec import CurveQ
from .traces import ap_table, trace_prime_power
from .zeta import InvariantViolation, rank_a_recursive

THETA_CLAMP = 1e-12

STATISTICS = ("theta_prime", "theta_dprime", "theta_n", "delta_big")


def st_antiderivative(theta):
    return (theta - np.sin(theta) * np.cos(theta)) / math.pi


def st_cdf(alpha: float, beta: float) -> float:
    """Sato-Tate mass of [alpha, beta]."""
    if not 0.0 <= alpha <= beta <= math.pi:
        raise ValueError(f"need 0 <= alpha <= beta <= pi, got ({alpha}, {beta})")
    return float(st_antiderivative(beta) - st_antiderivative(alpha))


def st_density(theta):
    return 2.0 / math.pi * np.sin(theta) ** 2


def theta_n(p: int, a_n, n: int) -> float:
    """arccos(a_n / (2 sqrt(p^n))), clamping only float round-off."""
    ratio = float(a_n) / (2.0 * math.sqrt(float(p) ** n))
    if abs(ratio) > 1.0 + THETA_CLAMP:
        raise InvariantViolation(f"|a_{n}| > 2 sqrt(p^{n}) at p={p}: ratio {ratio}")
    return math.acos(max(-1.0, min(1.0, ratio)))


def delta_big(p: int, theta: float, n: int) -> float:
    """Normalization of theta_n (theta_2 when n = 2) from the first rank-n law."""
    if n < 2:
        raise ValueError("delta_big needs n >= 2")
    sp = math.sqrt(p)
    if n == 2:
        return sp * math.cos(theta) + 0.5 * (sp - 1.0 / sp)
    return (
        math.sqrt(float(p) ** (n - 1)) / (n - 1) * (math.pi / 2 - theta)
        + 0.5 * sp
        + 0.5 * (n - 5) / (n - 1) / sp
    )


def delta_prime(p: int, a_n, n: int) -> float:
    """(a_n + (n-1) p + (n-5)) / (2 (n-1) sqrt p); exact numerator when a_n is rational."""
    if n < 3:
        raise ValueError("delta_prime needs n >= 3")
    num = a_n + (n - 1) * p + (n - 5)
    return float(num) / (2 * (n - 1) * math.sqrt(p))


def delta_double_prime(p: int, a_n, a_p: int, n: int) -> float:
    """(a_n - [(5-n) + (n-1) a_p - (n-1) p]) / (-6 / sqrt p)."""
    if n < 3:
        raise ValueError("delta_double_prime needs n >= 3")
    resid = a_n - ((5 - n) + (n - 1) * a_p - (n - 1) * p)
    return -float(resid) * math.sqrt(p) / 6.0


def _angle(delta: Optional[float]) -> Optional[float]:
    if delta is None or abs(delta) > 1.0:
        return None
    return math.acos(delta)


@dataclass(frozen=True)
class AngleSample:
    p: int
    a_p: int
    a_n: float
    theta_n: float
    delta_big: float
    delta_prime: Optional[float] = None
    delta_dprime: Optional[float] = None

    @property
    def theta_prime(self) -> Optional[float]:
        return _angle(self.delta_prime)

    @property
    def theta_dprime(self) -> Optional[float]:
        return _angle(self.delta_dprime)

    @property
    def theta_big(self) -> Optional[float]:
        return _angle(self.delta_big)

    @property
    def dropped_prime(self) -> bool:
        return self.delta_prime is not None and abs(self.delta_prime) > 1.0

    @property
    def dropped_dprime(self) -> bool:
        return self.delta_dprime is not None and abs(self.delta_dprime) > 1.0


def make_sample(q: int, a: int, n: int) -> AngleSample:
    """All statistics for one (q, a_q) pair. q is normally a prime."""
    if n < 2:
        raise ValueError("samples need n >= 2")
    a_n = rank_a_recursive(q, a, n)
    th = theta_n(q, a_n, n)
    big = delta_big(q, th, n)
    if n >= 3:
        return AngleSample(q, a, float(a_n), th, big, delta_prime(q, a_n, n), delta_double_prime(q, a_n, a, n))
    return AngleSample(q, a, float(a_n), th, big)


def samples_from_traces(traces, n: int) -> List[AngleSample]:
    return [make_sample(int(q), int(a), n) for q, a in traces]


def prime_power_traces(traces, q_max: int):
    """Extend [(p, a_p)] to all prime powers q <= q_max, sorted by q."""
    out = []
    for p, a in traces:
        q, k = p, 1
        while q <= q_max:
            out.append((q, trace_prime_power(a, p, k)))
            q *= p
            k += 1
    out.sort()
    return out


def collect_samples(curve: CurveQ, n: int, p_max: int, cache=None, include_prime_powers=False, workers: int = 1):
    """One AngleSample per good prime <= p_max, ascending."""
    traces = ap_table(curve, p_max, cache=cache, workers=workers)
    if include_prime_powers:
        traces = prime_power_traces(traces, p_max)
    return samples_from_traces(traces, n)


def statistic_angles(samples: Sequence[AngleSample], statistic: str) -> List[Optional[float]]:
    """Angles for a statistic, None where the normalized value leaves [-1, 1]."""
    if statistic == "theta_prime":
        return [s.theta_prime for s in samples]
    if statistic == "theta_dprime":
        return [s.theta_dprime for s in samples]
    if statistic == "theta_n":
        return [s.theta_n for s in samples]
    if statistic == "delta_big":
        return [s.theta_big for s in samples]
    raise ValueError(f"unknown statistic {statistic!r}; choose from {STATISTICS}")


@dataclass
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    dropped: int

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.dropped

    @property
    def retained(self) -> int:
        return int(self.counts.sum())

    @property
    def empty(self) -> bool:
        return self.retained == 0

    @property
    def density(self) -> np.ndarray:
        if self.empty:
            return np.zeros(len(self.counts))
        return self.counts / (self.retained * np.diff(self.bin_edges))


def empirical_histogram(angles: Sequence[Optional[float]], bins: int) -> Histogram:
    """Equal-width bins on [0, pi]; [left, right) except the last, which is closed.

    ``None`` entries are counted as dropped.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    kept = np.array([t for t in angles if t is not None], dtype=float)
    dropped = len(angles) - len(kept)
    edges = np.linspace(0.0, math.pi, bins + 1)
    if len(kept) == 0:
        warnings.warn("no retained samples; histogram is empty", RuntimeWarning, stacklevel=2)
        return Histogram(edges, np.zeros(bins, dtype=np.int64), dropped)
    idx = np.searchsorted(edges, kept, side="right") - 1
    idx = np.clip(idx, 0, bins - 1)
    counts = np.bincount(idx, minlength=bins).astype(np.int64)
    return Histogram(edges, counts, dropped)


def ks_distance(angles: Sequence[float]) -> float:
    """sup |F_empirical - F_ST| over the sample."""
    x = np.sort(np.asarray([t for t in angles if t is not None], dtype=float))
    m = len(x)
    if m == 0:
        raise ValueError("ks_distance needs at least one sample")
    F = st_antiderivative(x)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - F), np.max(F - (i - 1) / m)))


def _fmt(v) -> str:
    return format(float(v), ".12g")


def histogram_csv(h: Histogram) -> str:
    lines = ["bin_left,bin_right,count,density"]
    for lo, hi, c, d in zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts, h.density):
        lines.append(f"{_fmt(lo)},{_fmt(hi)},{int(c)},{_fmt(d)}")
    lines.append(f"# dropped={h.dropped}")
    lines.append(f"# total={h.total}")
    return "\n".join(lines) + "\n"


def read_histogram_csv(text: str) -> Histogram:
    rows, meta = [], {}
    lines = text.splitlines()
    if not lines or lines[0] != "bin_left,bin_right,count,density":
        raise ValueError("not a histogram CSV")
    for line in lines[1:]:
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = int(v)
        elif line:
            lo, hi, c, _ = line.split(",")
            rows.append((float(lo), float(hi), int(c)))
    edges = np.array([r[0] for r in rows] + [rows[-1][1]])
    h = Histogram(edges, np.array([r[2] for r in rows], dtype=np.int64), meta.get("dropped", 0))
    if "total" in meta and meta["total"] != h.total:
        raise ValueError("histogram total does not match counts + dropped")
    return h
