"""Sieve, Moebius function, Kronecker symbol and divisor enumeration."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

BUDGET_ENV = "SIGNLIFT_SIEVE_BUDGET_MB"
DEFAULT_BUDGET_MB = 512


class SieveBudgetError(ValueError):
    pass


def _budget_bytes() -> int:
    return int(float(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET_MB)) * 2**20)


@dataclass(frozen=True, eq=False)
class PrimeTable:
    limit: int
    primes: np.ndarray  # int64, increasing
    spf: np.ndarray  # int32, spf[n] = smallest prime factor of n; spf[0] = spf[1] = 0

    def __contains__(self, n: int) -> bool:
        return 2 <= n <= self.limit and self.spf[n] == n

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return n in self

    def pi(self, x: int) -> int:
        """Number of primes <= x."""
        return int(np.searchsorted(self.primes, x, side="right"))

    def primes_upto(self, x: int) -> np.ndarray:
        return self.primes[: self.pi(x)]

    def _check(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range [1, {self.limit}]")

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """[(p, e), ...] with p increasing."""
        self._check(n)
        out = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out


def sieve(x: int) -> PrimeTable:
    """Smallest-prime-factor sieve up to ``x``."""
    if x < 1:
        raise ValueError("sieve limit must be >= 1")
    need = 4 * (x + 1)
    if need > _budget_bytes():
        raise SieveBudgetError(
            f"sieve to {x} needs ~{need / 2**20:.0f} MB, over the budget set by {BUDGET_ENV}"
        )
    spf = np.zeros(x + 1, dtype=np.int32)
    for p in range(2, int(x**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(x + 1, dtype=np.int32)
    unmarked = spf == 0
    unmarked[:2] = False
    spf[unmarked] = idx[unmarked]
    primes = np.flatnonzero(unmarked).astype(np.int64)
    spf.flags.writeable = False
    primes.flags.writeable = False
    return PrimeTable(x, primes, spf)


def mobius(n: int, table: PrimeTable) -> int:
    fac = table.factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int, table: PrimeTable) -> list[int]:
    divs = [1]
    for p, e in table.factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def squarefree_divisors(n: int, table: PrimeTable) -> list[tuple[int, int]]:
    """Pairs (d, mu(d)) over squarefree d | n; the only terms of a Moebius sum."""
    out = [(1, 1)]
    for p, _ in table.factorize(n):
        out += [(d * p, -m) for d, m in out]
    return out


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out powers of 2 from n: (a|2) = 0 for even a, else +-1 by a mod 8
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol with reciprocity
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
