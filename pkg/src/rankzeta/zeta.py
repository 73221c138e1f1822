"""Rank-n zeta invariants of an elliptic curve over F_q, in exact arithmetic.

Everything is determined by (q, a, n) where a = a_{E/F_q}:

    (q^k - 1) beta_k = (q^k + q^(k-1) - a) beta_{k-1} - (q^(k-1) - q) beta_{k-2},
    beta_0 = 1, beta_{-1} = 0,

    a_n = (q^n + 1) - (q^n - 1) beta_n / beta_{n-1},

and the zeta numerator is P_n(T) = beta_{n-1} (1 - a_n T + q^n T^2).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple


class InvariantViolation(ArithmeticError):
    """An identity or bound that the theory guarantees has failed."""


def _check_args(q: int, a: int):
    if q <= 1:
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    if a * a > 4 * q:
        raise ValueError(f"a={a} violates the Hasse bound a^2 <= 4q at q={q}")


@dataclass(frozen=True)
class BetaSequence:
    q: int
    a: int
    values: Tuple[Fraction, ...]

    def __getitem__(self, k):
        if k == -1:
            return Fraction(0)
        return self.values[k]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def beta_sequence(q: int, a: int, n_max: int) -> BetaSequence:
    _check_args(q, a)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    prev, cur = Fraction(0), Fraction(1)
    vals = [cur]
    for k in range(1, n_max + 1):
        qk, qk1 = q**k, q ** (k - 1)
        prev, cur = cur, ((qk + qk1 - a) * cur - (qk1 - q) * prev) / (qk - 1)
        vals.append(cur)
    return BetaSequence(q, a, tuple(vals))


def rank_a_via_beta(bs: BetaSequence, n: int) -> Fraction:
    if not 1 <= n <= bs.n_max:
        raise ValueError(f"need 1 <= n <= {bs.n_max}, got {n}")
    Q = bs.q**n
    return (Q + 1) - (Q - 1) * bs[n] / bs[n - 1]


@lru_cache(maxsize=1 << 16)
def rank_a_recursive(q: int, a: int, n: int) -> Fraction:
    """a_n from a_{k+1} = 1 - q^k + a + (q^k - q)(q^k - 1) / (q^k + 1 - a_k), a_1 = a."""
    _check_args(q, a)
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Fraction(a)
    prev = rank_a_recursive(q, a, n - 1)
    k = n - 1
    qk = q**k
    denom = qk + 1 - prev
    if denom == 0:
        raise InvariantViolation(f"q^{k} + 1 == a_{k} at (q={q}, a={a})")
    return 1 - qk + a + Fraction((qk - q) * (qk - 1)) / denom


def rank_a(q: int, a: int, n: int) -> Fraction:
    return rank_a_recursive(q, a, n)


@dataclass(frozen=True)
class RankInvariant:
    q: int
    n: int
    a_n: Fraction
    beta_n: Fraction
    beta_prev: Fraction

    @property
    def Q(self) -> int:
        return self.q**self.n

    @property
    def a_n_float(self) -> float:
        return float(self.a_n)


def rank_invariant(q: int, a: int, n: int) -> RankInvariant:
    bs = beta_sequence(q, a, n)
    return RankInvariant(q, n, rank_a_via_beta(bs, n), bs[n], bs[n - 1])


@dataclass(frozen=True)
class ZetaPoly:
    """P(T) = alpha (1 - a_n T + Q T^2)."""

    alpha: Fraction
    a_n: Fraction
    Q: int

    @property
    def coefficients(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.alpha, -self.alpha * self.a_n, self.alpha * self.Q)

    def __call__(self, T):
        c0, c1, c2 = self.coefficients
        return c0 + c1 * T + c2 * T * T

    def reflected(self) -> Tuple[Fraction, Fraction, Fraction]:
        """Coefficients of Q T^2 P(1/(Q T)); equal to ``coefficients``."""
        c0, c1, c2 = self.coefficients
        return (c2 / self.Q, c1, c0 * self.Q)

    def __str__(self):
        c0, c1, c2 = self.coefficients
        return f"{c0} + ({c1})*T + ({c2})*T^2"


def zeta_polynomial(q: int, a: int, n: int) -> ZetaPoly:
    if n < 1:
        raise ValueError("n must be >= 1")
    bs = beta_sequence(q, a, n)
    return ZetaPoly(bs[n - 1], rank_a_via_beta(bs, n), q**n)


def _lt_two_sqrt(x: Fraction, Q: int) -> bool:
    """x < 2 sqrt(Q)."""
    return x < 0 or x * x < 4 * Q


def _gt_minus_two_sqrt(x: Fraction, Q: int) -> bool:
    """x > -2 sqrt(Q)."""
    return x >= 0 or x * x < 4 * Q


@dataclass(frozen=True)
class BoundReport:
    q: int
    a: int
    n: int
    a_n: Fraction
    rh: bool
    rh_strict: bool
    upper_two: bool
    lower_sqrt: bool
    ratio_lower: bool
    ratio_upper: bool

    @property
    def sharp_bounds(self) -> bool:
        return self.upper_two and self.lower_sqrt

    @property
    def ratio_bounds(self) -> bool:
        return self.ratio_lower and self.ratio_upper

    @property
    def ok(self) -> bool:
        if self.n == 1:
            return self.rh
        return self.rh_strict and self.sharp_bounds and self.ratio_bounds

    def failures(self):
        names = ["rh", "rh_strict", "upper_two", "lower_sqrt", "ratio_lower", "ratio_upper"]
        if self.n == 1:
            names = ["rh"]
        return [k for k in names if not getattr(self, k)]


def check_rank_rh(q: int, a: int, n: int) -> BoundReport:
    """Exact checks of a_n^2 <= 4 q^n, 2 > a_n > -2 sqrt(q^n) and
    1 < beta_n / beta_{n-1} < (sqrt(q^n) + 1) / (sqrt(q^n) - 1).

    The last two are only asserted by the theory for n >= 2 and are reported
    as vacuously true at n = 1.
    """
    ri = rank_invariant(q, a, n)
    Q, x = ri.Q, ri.a_n
    rh = x * x <= 4 * Q
    rh_strict = x * x < 4 * Q
    if n == 1:
        return BoundReport(q, a, n, x, rh, rh_strict, True, True, True, True)
    r = ri.beta_n / ri.beta_prev
    ratio_lower = r > 1
    # r < (s+1)/(s-1) with s = sqrt(Q) > 1  <=>  Q (r-1)^2 < (r+1)^2 given r > 1
    ratio_upper = r <= 1 or Q * (r - 1) ** 2 < (r + 1) ** 2
    return BoundReport(
        q, a, n, x, rh, rh_strict,
        upper_two=x < 2,
        lower_sqrt=_gt_minus_two_sqrt(x, Q),
        ratio_lower=ratio_lower,
        ratio_upper=ratio_upper,
    )


def first_order_prediction(q, a, n):
    return (5 - n) + (n - 1) * a - (n - 1) * q


def asymptotic_prediction(q: int, a: int, n: int, order: str = "first") -> float:
    """Truncated large-q expansion of a_n, valid for n >= 3."""
    if n < 3:
        raise ValueError("the expansion applies for n >= 3; a_2 = 1 + a - q exactly")
    base = first_order_prediction(q, a, n)
    if order == "first":
        return float(base)
    if order == "second":
        return float(base - Fraction(3 * a, q))
    raise ValueError(f"order must be 'first' or 'second', got {order!r}")


def first_order_residual(q: int, a: int, n: int) -> Fraction:
    """a_n - [(5-n) + (n-1) a - (n-1) q], exact."""
    return rank_a_recursive(q, a, n) - first_order_prediction(q, a, n)


def second_order_residual(q: int, a: int, n: int) -> Fraction:
    return first_order_residual(q, a, n) + Fraction(3 * a, q)
