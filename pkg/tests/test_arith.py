import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codsum.arith import (
    FactoredInteger,
    divisors,
    euler_totient,
    factorize,
    first_primes,
    is_prime,
    mod_pow,
    multiplicative_order,
    primes_up_to,
    sqrt_mod,
)


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    # order of the Suzuki group discussed alongside the construction
    assert factorize(29120).factors == ((2, 6), (5, 1), (7, 1), (13, 1))


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(1 << 63)


def test_factorize_large_semiprime():
    # both factors prime and just below sqrt(2**63)
    p, q = 3037000493, 3036999941
    assert is_prime(p) and is_prime(q)
    assert factorize(p * q).factors == ((q, 1), (p, 1))


def test_factorize_primorial():
    n = math.prod(first_primes(15))
    assert factorize(n).factors == tuple((p, 1) for p in first_primes(15))


def test_factored_integer_invariants():
    with pytest.raises(ValueError):
        FactoredInteger(((3, 1), (2, 1)))  # not ascending
    with pytest.raises(ValueError):
        FactoredInteger(((4, 1),))  # not prime
    with pytest.raises(ValueError):
        FactoredInteger(((2, 0),))  # exponent < 1
    assert FactoredInteger(()).value() == 1
    assert str(factorize(12)) == "2^2*3"


@settings(max_examples=60, derandomize=True, deadline=None)
@given(st.integers(2, 2**31), st.integers(2, 2**31))
def test_factorize_recombines_products(a, b):
    fa, fb, fab = factorize(a), factorize(b), factorize(a * b)
    merged: dict[int, int] = {}
    for f in (fa, fb):
        for p, e in f.factors:
            merged[p] = merged.get(p, 0) + e
    assert fab.factors == tuple(sorted(merged.items()))
    assert fab.value() == a * b


def test_totient_examples():
    assert euler_totient(1) == 1
    assert euler_totient(12) == 4
    for p in (2, 3, 31, 97):
        assert euler_totient(p) == p - 1


@settings(max_examples=40, derandomize=True, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_totient_multiplicative(a, b):
    if math.gcd(a, b) == 1:
        assert euler_totient(a * b) == euler_totient(a) * euler_totient(b)


def test_totient_divisor_sum_exhaustive():
    # sum of totients over divisors reconstructs n
    for n in range(1, 10**4 + 1):
        assert sum(euler_totient(d) for d in divisors(n)) == n


def test_divisors_examples():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(49) == [1, 7, 49]
    f = factorize(360)
    count = 1
    for _, e in f.factors:
        count *= e + 1
    assert len(divisors(f)) == count


def test_mod_pow_examples():
    assert mod_pow(2, 10, 1000) == 24
    assert mod_pow(7, 0, 13) == 1
    assert mod_pow(5, 3, 3) == 2
    with pytest.raises(ValueError):
        mod_pow(2, 3, 0)


@settings(max_examples=50, derandomize=True, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 10**4), st.integers(1, 10**9))
def test_mod_pow_matches_builtin(b, e, m):
    assert mod_pow(b, e, m) == pow(b, e, m)


def test_is_prime_against_sieve():
    primes = set(primes_up_to(2000))
    for n in range(2000):
        assert is_prime(n) == (n in primes)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**31 + 11))
    assert is_prime(10**18 + 9)


def test_first_primes():
    assert first_primes(5) == [2, 3, 5, 7, 11]
    assert first_primes(100)[-1] == 541
    assert first_primes(0) == []


def test_multiplicative_order():
    assert multiplicative_order(2, 5) == 4
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(1, 1) == 1
    with pytest.raises(ValueError):
        multiplicative_order(2, 4)


def test_sqrt_mod_roundtrip():
    for p in (3, 7, 13, 101, 7001, 9473):
        for a in range(1, min(p, 50)):
            sq = a * a % p
            r = sqrt_mod(sq, p)
            assert r * r % p == sq
            assert r <= p - r
    with pytest.raises(ValueError):
        sqrt_mod(2, 3)  # 2 is not a square mod 3
