"""Prime-field plumbing: primality, factorization, orders, primitive roots,
and generation of the multiplicative subgroup of k-th powers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# Miller-Rabin with these fixed witnesses is exact for every m < 2^64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic primality test, exact for all 64-bit inputs."""
    if m < 2:
        return False
    for q in _MR_WITNESSES:
        if m % q == 0:
            return m == q
    d = m - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n (sieve of Eratosthenes)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(2, n + 1) if sieve[i]]


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [p for p in primes_up_to(hi) if p >= lo]


def factorize(n: int) -> tuple[int, ...]:
    """Prime factors of n with multiplicity, ascending (trial division)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for q in sorted(set(factorize(n))) if n > 1 else []:
        e = 0
        m = n
        while m % q == 0:
            e += 1
            m //= q
        divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


@dataclass(frozen=True)
class PrimeField:
    """An odd prime modulus p together with the factorization of p-1."""

    p: int
    p_minus_1_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if math.prod(self.p_minus_1_factors) != self.p - 1:
            raise ValueError(f"factor list does not multiply to {self.p - 1}")

    @classmethod
    def of(cls, p: int) -> "PrimeField":
        if p < 3 or not is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        return cls(p, factorize(p - 1))

    @property
    def unit_count(self) -> int:
        return self.p - 1

    def divisors_of_unit_count(self) -> list[int]:
        return divisors(self.p - 1)


@dataclass(frozen=True)
class SubgroupSpec:
    """(p, k, t) naming the subgroup of k-th powers, of order t = (p-1)/k."""

    field: PrimeField
    k: int
    t: int

    def __post_init__(self) -> None:
        if self.k < 1 or (self.field.p - 1) % self.k != 0:
            raise ValueError(f"k={self.k} does not divide p-1={self.field.p - 1}")
        if self.k * self.t != self.field.p - 1:
            raise ValueError(f"k*t must equal p-1, got {self.k}*{self.t}")

    @classmethod
    def of(cls, field: PrimeField, k: int) -> "SubgroupSpec":
        if k < 1 or (field.p - 1) % k != 0:
            raise ValueError(f"k={k} does not divide p-1={field.p - 1}")
        return cls(field, k, (field.p - 1) // k)


def element_order(field: PrimeField, x: int) -> int:
    """Least m >= 1 with x^m = 1 mod p, via the prime factors of p-1."""
    p = field.p
    x %= p
    if x == 0:
        raise ValueError("0 has no multiplicative order")
    order = p - 1
    for q in set(field.p_minus_1_factors):
        while order % q == 0 and pow(x, order // q, p) == 1:
            order //= q
    return order


@lru_cache(maxsize=4096)
def _primitive_root(p: int, distinct_factors: tuple[int, ...]) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in distinct_factors):
            return g
    raise AssertionError(f"no generator found for p={p}")  # unreachable for prime p


def primitive_root(field: PrimeField) -> int:
    """Smallest generator of Z_p^* (order exactly p-1)."""
    return _primitive_root(field.p, tuple(sorted(set(field.p_minus_1_factors))))


def subgroup_elements(field: PrimeField, k: int) -> tuple[int, ...]:
    """Sorted elements of the k-th power subgroup, via powers of a generator."""
    p = field.p
    if k < 1 or (p - 1) % k != 0:
        raise ValueError(f"k={k} does not divide p-1={p - 1}")
    h = pow(primitive_root(field), k, p)
    t = (p - 1) // k
    out = []
    acc = 1
    for _ in range(t):
        out.append(acc)
        acc = acc * h % p
    return tuple(sorted(out))


def kth_power_image(field: PrimeField, k: int) -> tuple[int, ...]:
    """Reference route: {x^k : x in Z_p^*} by direct enumeration."""
    p = field.p
    if k < 1 or (p - 1) % k != 0:
        raise ValueError(f"k={k} does not divide p-1={p - 1}")
    return tuple(sorted({pow(x, k, p) for x in range(1, p)}))
