"""Integer and modular arithmetic: factorization, Bezout pairs, CRT relabelings, SL(2, Z/n)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceededError

SL2_CAP = 30


@dataclass(frozen=True)
class Factorization:
    d: int
    factors: tuple[tuple[int, int], ...]

    @property
    def prime_powers(self) -> list[int]:
        return [p**m for p, m in self.factors]

    @property
    def is_prime(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1


def factorize(d: int) -> Factorization:
    """Prime-power factorization by trial division, primes in increasing order."""
    d = int(d)
    if d <= 1:
        raise ValueError(f"factorize needs d >= 2, got {d}")
    factors = []
    n, p = d, 2
    while p * p <= n:
        if n % p == 0:
            m = 0
            while n % p == 0:
                n //= p
                m += 1
            factors.append((p, m))
        p += 1
    if n > 1:
        factors.append((n, 1))
    return Factorization(d, tuple(factors))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n).is_prime


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def units(n: int) -> list[int]:
    return [k for k in range(1, n) if math.gcd(k, n) == 1]


def bezout(p: int, q: int) -> tuple[int, int]:
    """Return (a, b) with a*p + b*q == 1 and a reduced into (-q/2, q/2].

    >>> bezout(2, 3)
    (-1, 1)
    >>> bezout(4, 9)
    (-2, 1)
    """
    p, q = int(p), int(q)
    if p < 1 or q < 1:
        raise ValueError(f"bezout expects positive integers, got ({p}, {q})")
    g = math.gcd(p, q)
    if g != 1:
        raise ValueError(f"bezout({p}, {q}): inputs are not coprime (gcd = {g})")
    if q == 1:
        return 0, 1
    a = pow(p, -1, q)
    if 2 * a > q:
        a -= q
    b = (1 - a * p) // q
    return a, b


def _check_coprime(d1: int, d2: int) -> None:
    if d1 < 1 or d2 < 1:
        raise ValueError(f"moduli must be positive, got ({d1}, {d2})")
    g = math.gcd(d1, d2)
    if g != 1:
        raise ValueError(f"moduli {d1} and {d2} are not coprime (gcd = {g})")


def crt_index_map(d1: int, d2: int) -> np.ndarray:
    """pi[x] = (x mod d1) * d2 + (x mod d2): dimension-(d1*d2) index -> row-major tensor index."""
    _check_coprime(d1, d2)
    return crt_index_map_multi((d1, d2))


def crt_index_map_multi(moduli) -> np.ndarray:
    """Row-major CRT relabeling for any list of pairwise coprime moduli."""
    moduli = [int(m) for m in moduli]
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            _check_coprime(moduli[i], moduli[j])
    d = math.prod(moduli)
    x = np.arange(d)
    pi = np.zeros(d, dtype=np.int64)
    for m in moduli:
        pi = pi * m + x % m
    return pi


@dataclass(frozen=True)
class SL2Element:
    a: int
    b: int
    c: int
    d: int
    n: int

    def __post_init__(self):
        if (self.a * self.d - self.b * self.c - 1) % self.n:
            raise ValueError(f"determinant of {self.as_tuple()} is not 1 mod {self.n}")

    @classmethod
    def from_matrix(cls, m, n: int) -> "SL2Element":
        (a, b), (c, d) = m
        return cls(int(a) % n, int(b) % n, int(c) % n, int(d) % n, n)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def as_matrix(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, other: "SL2Element") -> "SL2Element":
        if self.n != other.n:
            raise ValueError("moduli differ")
        n = self.n
        return SL2Element(
            (self.a * other.a + self.b * other.c) % n,
            (self.a * other.b + self.b * other.d) % n,
            (self.c * other.a + self.d * other.c) % n,
            (self.c * other.b + self.d * other.d) % n,
            n,
        )

    def apply(self, u: tuple[int, int]) -> tuple[int, int]:
        x, y = u
        return ((self.a * x + self.b * y) % self.n, (self.c * x + self.d * y) % self.n)


@lru_cache(maxsize=None)
def _sl2_array(n: int) -> np.ndarray:
    r = np.arange(n)
    a, b, c, d = (g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = (a * d - b * c) % n == 1
    out = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1)
    out.setflags(write=False)
    return out


def sl2_array(n: int, cap: int = SL2_CAP) -> np.ndarray:
    """All of SL(2, Z/n) as an (N, 4) array of (a, b, c, d), lexicographic order."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    if n > cap:
        raise BudgetExceededError(f"SL(2, Z/{n}) enumeration exceeds cap {cap} (O(n^4) candidates)")
    return _sl2_array(n)


def enumerate_sl2(n: int, cap: int = SL2_CAP) -> list[SL2Element]:
    """Brute-force enumeration of SL(2, Z/n); ``len`` of the result is the group order."""
    return [SL2Element(int(a), int(b), int(c), int(d), n) for a, b, c, d in sl2_array(n, cap)]
