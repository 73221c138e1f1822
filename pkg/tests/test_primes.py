import sympy
from hypothesis import given, strategies as st

from rankzeta.primes import first_primes, is_prime, nth_prime, prime_power_base, sieve


def test_sieve_matches_sympy():
    assert list(sieve(5000)) == list(sympy.primerange(2, 5001))


def test_sieve_small():
    assert len(sieve(1)) == 0
    assert list(sieve(2)) == [2]
    assert len(sieve(30)) == 10


def test_nth_prime_examples():
    assert nth_prime(1) == 2
    assert nth_prime(2) == 3
    assert nth_prime(6) == 13
    assert nth_prime(1000) == 7919


def test_nth_prime_rejects_zero():
    import pytest

    with pytest.raises(ValueError):
        nth_prime(0)


def test_first_primes():
    assert list(first_primes(5)) == [2, 3, 5, 7, 11]


@given(st.integers(min_value=-10, max_value=10**7))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.sampled_from(list(sympy.primerange(2, 200))), st.integers(1, 6))
def test_prime_power_base_roundtrip(p, k):
    assert prime_power_base(p**k) == (p, k)


@given(st.integers(2, 10**5))
def test_prime_power_base_agrees_with_factorint(q):
    f = sympy.factorint(q)
    expected = next(iter(f.items())) if len(f) == 1 else None
    assert prime_power_base(q) == expected
