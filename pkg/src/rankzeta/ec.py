"""Elliptic curves over Q and their reductions modulo primes.

Models are taken as given (database curves are globally minimal); good
reduction is decided against the discriminant of the supplied model.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .primes import sieve


class SingularCurveError(ValueError):
    pass


class BadReductionError(ValueError):
    pass


def b_invariants(coeffs):
    a1, a2, a3, a4, a6 = coeffs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(coeffs):
    b2, b4, b6, _ = b_invariants(coeffs)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    return c4, c6


def discriminant_of(coeffs) -> int:
    b2, b4, b6, b8 = b_invariants(coeffs)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


@dataclass(frozen=True)
class CurveQ:
    """Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    label: str
    coeffs: Tuple[int, int, int, int, int]
    isogeny_class: str = ""
    conductor: int = 1
    rank: int = 0
    cm_flag: Optional[bool] = None
    _disc: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != 5:
            raise ValueError(f"{self.label}: need five coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)
        disc = discriminant_of(coeffs)
        if disc == 0:
            raise SingularCurveError(f"{self.label}: zero discriminant for {coeffs}")
        if self.conductor < 1:
            raise ValueError(f"{self.label}: conductor must be >= 1, got {self.conductor}")
        if self.rank < 0:
            raise ValueError(f"{self.label}: rank must be >= 0, got {self.rank}")
        object.__setattr__(self, "_disc", disc)

    @property
    def discriminant(self) -> int:
        return self._disc

    def has_good_reduction(self, p: int) -> bool:
        return self._disc % p != 0


def discriminant(curve: CurveQ) -> int:
    return curve.discriminant


@dataclass(frozen=True)
class ReducedCurve:
    """Reduction of a curve mod p.

    For p > 3 ``equation`` is (A, B) with y^2 = x^3 + A x + B; for p in
    {2, 3} it is the five reduced long-form coefficients.
    """

    p: int
    good: bool
    equation: Tuple[int, ...]

    @property
    def reduction_kind(self) -> str:
        return "good" if self.good else "bad"

    @property
    def short(self) -> bool:
        return len(self.equation) == 2


def short_form_mod(coeffs, p: int) -> Tuple[int, int]:
    """(A, B) of the depressed model over F_p, p > 3.

    Completing the square and shifting x by b2/12 gives A = -c4/48 and
    B = -c6/864, which is the identity on curves already in short form.
    """
    c4, c6 = c_invariants(coeffs)
    A = -c4 * pow(48, -1, p) % p
    B = -c6 * pow(864, -1, p) % p
    return A, B


def reduce(curve: CurveQ, p: int) -> ReducedCurve:
    good = curve.has_good_reduction(p)
    if p > 3:
        return ReducedCurve(p, good, short_form_mod(curve.coeffs, p))
    return ReducedCurve(p, good, tuple(c % p for c in curve.coeffs))


def good_primes(curve: CurveQ, p_max: int) -> list:
    """Ascending primes p <= p_max not dividing the model discriminant."""
    disc = curve.discriminant
    return [int(p) for p in sieve(p_max) if disc % int(p) != 0]
