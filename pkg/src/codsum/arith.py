"""Exact integer arithmetic: factorization, totient, divisors, modular helpers.

Everything here is pure and deterministic.  Factorization handles any
positive integer below 2**63 via trial division by primes up to 10**6
followed by Brent-cycle Pollard rho on the remaining cofactor, with a
deterministic Miller-Rabin primality test (base set valid below 2**64).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Ratios of codegree sums and bound constants are ordinary stdlib fractions:
# always stored reduced, denominator positive.
BigRational = Fraction

MAX_FACTOR_INPUT = 1 << 63

# Witnesses proving compositeness for every composite below 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 1_000_000
_trial_sieve: bytearray | None = None
_trial_primes: list[int] | None = None


def _sieve_bytes(limit: int) -> bytearray:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return sieve


def _trial_tables() -> tuple[bytearray, list[int]]:
    global _trial_sieve, _trial_primes
    if _trial_primes is None:
        _trial_sieve = _sieve_bytes(_TRIAL_LIMIT)
        _trial_primes = [i for i, v in enumerate(_trial_sieve) if v]
    return _trial_sieve, _trial_primes  # type: ignore[return-value]


def primes_up_to(n: int) -> list[int]:
    """All primes <= n, ascending."""
    if n < 2:
        return []
    if n <= _TRIAL_LIMIT:
        sieve, primes = _trial_tables()
        import bisect

        return primes[: bisect.bisect_right(primes, n)]
    sieve = _sieve_bytes(n)
    return [i for i, v in enumerate(sieve) if v]


def first_primes(t: int) -> list[int]:
    """The first t primes."""
    if t <= 0:
        return []
    bound = 32
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= t:
            return ps[:t]
        bound *= 2


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n < 2:
        return False
    if n <= _TRIAL_LIMIT:
        sieve, _ = _trial_tables()
        return bool(sieve[n])
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (deterministic Brent variant)."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # rare cycle degeneracy: retry with the next polynomial


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer as an ordered tuple of (prime, exponent) pairs.

    The empty tuple represents 1.  Primes strictly increase and every
    exponent is >= 1; this is checked at construction.
    """

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 1
        for p, e in self.factors:
            if p <= last:
                raise ValueError(f"primes not strictly increasing: {self.factors}")
            if e < 1:
                raise ValueError(f"exponent < 1 in {self.factors}")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            last = p

    def value(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factorize(n: int) -> FactoredInteger:
    """Factor 1 <= n < 2**63 into prime powers with ascending primes."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    if n >= MAX_FACTOR_INPUT:
        raise ValueError(f"factorize supports n < 2**63, got {n}")
    found: dict[int, int] = {}
    _, small = _trial_tables()
    for p in small:
        if p * p > n:
            break
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                found[m] = found.get(m, 0) + 1
            else:
                d = _brent_rho(m)
                stack.append(d)
                stack.append(m // d)
    return FactoredInteger(tuple(sorted(found.items())))


def as_factored(n: int | FactoredInteger) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(n)


def euler_totient(n: int | FactoredInteger) -> int:
    """Count of units modulo n; totient(1) = 1."""
    f = as_factored(n)
    t = 1
    for p, e in f.factors:
        t *= p ** (e - 1) * (p - 1)
    return t


def divisors(n: int | FactoredInteger) -> list[int]:
    """All divisors of n, sorted ascending."""
    f = as_factored(n)
    divs = [1]
    for p, e in f.factors:
        pk = 1
        ext = []
        for _ in range(e):
            pk *= p
            ext.extend(d * pk for d in divs)
        divs.extend(ext)
    divs.sort()
    return divs


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent reduced into [0, modulus)."""
    if modulus < 1:
        raise ValueError(f"modulus must be >= 1, got {modulus}")
    return pow(base, exponent, modulus)


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in the unit group mod n; requires gcd(a, n) = 1."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    if n == 1:
        return 1
    a %= n
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    order = euler_totient(n)
    for p, e in factorize(order).factors:
        for _ in range(e):
            if pow(a, order // p, n) == 1:
                order //= p
            else:
                break
    return order


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a modulo odd prime p (Tonelli-Shanks).

    Requires a to be a quadratic residue; raises ValueError otherwise.
    Returns the root r with r <= p - r.
    """
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return min(r, p - r)
