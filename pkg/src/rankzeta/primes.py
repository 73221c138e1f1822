"""Prime sieving helpers."""

import math
from functools import lru_cache

import numpy as np


def sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_prime[p]:
            is_prime[p * p :: 2 * p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if b % n == 0:
            continue
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power_base(q: int):
    """Return (p, k) with q == p**k, or None if q is not a prime power."""
    if q < 2:
        return None
    for k in range(q.bit_length(), 0, -1):
        p = round(q ** (1.0 / k))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**k == q and is_prime(cand):
                return cand, k
    return None


@lru_cache(maxsize=8)
def _first_primes(count: int) -> np.ndarray:
    # p_i < i (ln i + ln ln i) for i >= 6
    if count < 6:
        bound = 15
    else:
        bound = int(count * (math.log(count) + math.log(math.log(count)))) + 1
    return sieve(bound)[:count]


def nth_prime(i: int) -> int:
    """The i-th prime, with nth_prime(1) == 2."""
    if i < 1:
        raise ValueError(f"prime index must be >= 1, got {i}")
    size = 1024
    while size < i:
        size *= 2
    return int(_first_primes(size)[i - 1])


def first_primes(count: int) -> list:
    if count < 0:
        raise ValueError("count must be nonnegative")
    size = 1024
    while size < count:
        size *= 2
    return [int(p) for p in _first_primes(size)[:count]]
