"""Point counting and traces of Frobenius a_p = p + 1 - #E(F_p).

Three routes:

* ``count_points_bruteforce``: full (x, y) enumeration, reference oracle only.
* ``trace_legendre``: a_p = -sum_x chi(x^3 + A x + B) against a cached
  quadratic-residue table, O(p).
* ``trace_bsgs``: baby-step giant-step on the orders of points of E and of
  its quadratic twist, O(p^(1/4)) group operations, used for large p.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

import numpy as np

from .ec import BadReductionError, CurveQ, ReducedCurve, c_invariants, reduce
from .primes import sieve

# Below this the O(p) table sum is cheaper than order finding and the Hasse
# interval is too short relative to typical group exponents.
BSGS_MIN_P = 2000
_BSGS_MAX_POINTS = 40


def _require_good(rc: ReducedCurve):
    if not rc.good:
        raise BadReductionError(f"bad reduction at p={rc.p}")


def count_points_bruteforce(rc: ReducedCurve) -> int:
    """#E(F_p) including the point at infinity, by enumerating all pairs."""
    _require_good(rc)
    p = rc.p
    x = np.arange(p, dtype=np.int64)[:, None]
    y = np.arange(p, dtype=np.int64)[None, :]
    if rc.short:
        A, B = rc.equation
        lhs = y * y % p
        rhs = (x * x % p * x + A * x + B) % p
    else:
        a1, a2, a3, a4, a6 = rc.equation
        lhs = (y * y + a1 * x * y + a3 * y) % p
        rhs = (x * x % p * x + a2 * x * x + a4 * x + a6) % p
    return int(np.count_nonzero(lhs == rhs)) + 1


@lru_cache(maxsize=64)
def qr_table(p: int) -> np.ndarray:
    """chi(t) for t in [0, p): 0 at t = 0, +1 on nonzero squares, -1 otherwise."""
    chi = np.full(p, -1, dtype=np.int8)
    t = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    chi[t * t % p] = 1
    chi[0] = 0
    return chi


@lru_cache(maxsize=64)
def _cubes(p: int) -> np.ndarray:
    x = np.arange(p, dtype=np.int64)
    return x * x % p * x % p


def trace_legendre(A: int, B: int, p: int) -> int:
    chi = qr_table(p)
    x = np.arange(p, dtype=np.int64)
    f = (_cubes(p) + (A % p) * x + (B % p)) % p
    return -int(chi[f].sum(dtype=np.int64))


def _legendre_batch_py(A, B, p, chi, cubes):
    x = np.arange(p, dtype=np.int64)[None, :]
    out = np.empty(len(A), dtype=np.int64)
    for lo in range(0, len(A), 256):
        f = (cubes[None, :] + A[lo : lo + 256, None] * x + B[lo : lo + 256, None]) % p
        out[lo : lo + 256] = -chi[f].sum(axis=1, dtype=np.int64)
    return out


try:
    from numba import njit
except ImportError:  # pragma: no cover
    _legendre_batch = _legendre_batch_py
else:

    @njit(cache=True)
    def _legendre_batch(A, B, p, chi, cubes):
        out = np.empty(len(A), dtype=np.int64)
        for k in range(len(A)):
            a, b = A[k], B[k]
            ax = 0
            s = 0
            for x in range(p):
                v = cubes[x] + ax + b
                if v >= p:
                    v -= p
                    if v >= p:
                        v -= p
                s += chi[v]
                ax += a
                if ax >= p:
                    ax -= p
            out[k] = -s
        return out


def traces_at_prime(AB, p: int) -> np.ndarray:
    """a_p for many short models (rows of (A, B)) sharing one prime."""
    AB = np.asarray(AB, dtype=np.int64).reshape(-1, 2) % p
    return _legendre_batch(np.ascontiguousarray(AB[:, 0]), np.ascontiguousarray(AB[:, 1]), p, qr_table(p), _cubes(p))


# --- affine arithmetic on y^2 = x^3 + A x + B over F_p; None is infinity ---


def _ec_add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _ec_mul(k, P, A, p):
    R = None
    while k:
        if k & 1:
            R = _ec_add(R, P, A, p)
        k >>= 1
        if k:
            P = _ec_add(P, P, A, p)
    return R


def _annihilators(P, A, p, lo, hi):
    """All m in [lo, hi] with mP = O, or None when P has order <= 2s."""
    s = math.isqrt(hi - lo) + 1
    table = {}
    R = None
    for j in range(1, s + 1):
        R = _ec_add(R, P, A, p)
        if R is None or R[0] in table:
            return None
        table[R[0]] = (j, R[1])
    step = 2 * s + 1
    G = _ec_mul(step, P, A, p)
    t = lo + s
    Q = _ec_mul(t, P, A, p)
    found = []
    while t - s <= hi:
        if Q is None:
            found.append(t)
        else:
            hit = table.get(Q[0])
            if hit is not None:
                j, y = hit
                found.append(t - j if y == Q[1] else t + j)
        Q = _ec_add(Q, G, A, p)
        t += step
    return {m for m in found if lo <= m <= hi}


def trace_bsgs(A: int, B: int, p: int) -> int:
    """a_p from point orders on E and its quadratic twist.

    x-coordinates are tried in order 0, 1, 2, ...; for d = f(x) != 0 the point
    (d x, d^2) lies on y^2 = X^3 + A d^2 X + B d^3, which is E when d is a
    square and the twist otherwise. Falls back to the table sum if the
    candidate set does not collapse.
    """
    A %= p
    B %= p
    r = math.isqrt(4 * p)
    lo, hi = p + 1 - r, p + 1 + r
    candidates = None
    tried = 0
    x = 0
    while tried < _BSGS_MAX_POINTS and x < p:
        d = (x * x * x + A * x + B) % p
        x += 1
        if d == 0:
            continue
        tried += 1
        d2 = d * d % p
        Ad = A * d2 % p
        ms = _annihilators((d * (x - 1) % p, d2), Ad, p, lo, hi)
        if ms is None:
            continue
        if pow(d, (p - 1) // 2, p) != 1:
            ms = {2 * p + 2 - m for m in ms}
        candidates = ms if candidates is None else candidates & ms
        if len(candidates) == 1:
            return p + 1 - candidates.pop()
    return trace_legendre(A, B, p)


def trace_of_frobenius(rc: ReducedCurve, method: str = "auto") -> int:
    _require_good(rc)
    p = rc.p
    if not rc.short:
        return p + 1 - count_points_bruteforce(rc)
    A, B = rc.equation
    if method == "bruteforce":
        return p + 1 - count_points_bruteforce(rc)
    if method == "legendre" or (method == "auto" and p < BSGS_MIN_P):
        return trace_legendre(A, B, p)
    if method in ("bsgs", "auto"):
        return trace_bsgs(A, B, p)
    raise ValueError(f"unknown method {method!r}")


def trace_prime_power(a_p: int, p: int, k: int) -> int:
    """a_{p^k} from a_{p^k} = a_p a_{p^(k-1)} - p a_{p^(k-2)}, a_{p^0} = 2."""
    if a_p * a_p > 4 * p:
        raise ValueError(f"a_p={a_p} violates the Hasse bound at p={p}")
    if k < 1:
        raise ValueError("k must be >= 1")
    prev, cur = 2, a_p
    for _ in range(k - 1):
        prev, cur = cur, a_p * cur - p * prev
    return cur


def _traces_for_primes(curve: CurveQ, primes, method: str):
    out = []
    for p in primes:
        out.append(trace_of_frobenius(reduce(curve, p), method))
    return out


def ap_table(curve: CurveQ, p_max: int, cache=None, method: str = "auto", workers: int = 1):
    """[(p, a_p)] over good primes p <= p_max, ascending.

    With ``cache`` (a TraceCache) stored values are reused and new ones
    appended. ``workers > 1`` fans the missing primes out to processes;
    results are reassembled in prime order.
    """
    disc = curve.discriminant
    primes = [int(p) for p in sieve(p_max) if disc % int(p)]
    known = {}
    if cache is not None:
        for p in primes:
            a = cache.get(curve.label, p)
            if a is not None:
                known[p] = a
    todo = [p for p in primes if p not in known]
    if todo:
        if workers > 1 and len(todo) > 1000:
            chunks = [todo[i::workers] for i in range(workers)]
            with ProcessPoolExecutor(workers) as pool:
                results = pool.map(_traces_for_primes, [curve] * workers, chunks, [method] * workers)
                for chunk, vals in zip(chunks, results):
                    known.update(zip(chunk, vals))
        else:
            known.update(zip(todo, _traces_for_primes(curve, todo, method)))
        if cache is not None:
            cache.put_many(curve.label, [(p, known[p]) for p in todo])
    return [(p, known[p]) for p in primes]


def family_traces(curves, primes):
    """a_p for each curve at each prime, batched per prime.

    Returns an int64 array of shape (len(curves), len(primes)) and a boolean
    good-reduction mask of the same shape; entries at bad primes are 0.
    """
    traces = np.zeros((len(curves), len(primes)), dtype=np.int64)
    good = np.zeros((len(curves), len(primes)), dtype=bool)
    cinv = [c_invariants(c.coeffs) for c in curves]
    discs = [c.discriminant for c in curves]
    for j, p in enumerate(primes):
        rows = [i for i, d in enumerate(discs) if d % p]
        good[rows, j] = True
        if not rows:
            continue
        if p <= 3:
            for i in rows:
                traces[i, j] = trace_of_frobenius(reduce(curves[i], p))
            continue
        i48, i864 = pow(48, -1, p), pow(864, -1, p)
        AB = [(-cinv[i][0] * i48 % p, -cinv[i][1] * i864 % p) for i in rows]
        traces[rows, j] = traces_at_prime(AB, p)
    return traces, good
