"""Half-integral weight coefficients a(t n^2) recovered from the lifted eigenform.

With a(t) = 1 the lift satisfies, for every prime p,

    A(p) = a(t p^2) + eps(p) p^(k-1),        eps(d) = ((-1)^k t | d),

and the whole sub-series is the multiplicative completion

    a(t n^2) = sum_{d | n} mu(d) eps(d) d^(k-1) A(n/d).
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .arith import PrimeTable, is_squarefree, kronecker, sieve
from .qseries import Eigenform, QSeries


class InsufficientPrecisionError(ValueError):
    pass


@dataclass(frozen=True)
class LiftParams:
    t: int
    k: int
    eigenform: Eigenform = field(repr=False)

    def __post_init__(self):
        if not is_squarefree(self.t):
            raise ValueError(f"t must be squarefree, got {self.t}")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.eigenform.weight != 2 * self.k:
            raise ValueError(
                f"eigenform weight {self.eigenform.weight} != 2k = {2 * self.k}"
            )

    @classmethod
    def for_form(cls, form: Eigenform, t: int = 1) -> "LiftParams":
        return cls(t, form.weight // 2, form)


@dataclass(frozen=True)
class LiftedStream:
    """values[n] = a(t n^2) for 1 <= n <= precision; values[0] is an unused 0."""

    params: LiftParams
    values: tuple[int, ...] = field(repr=False)
    precision: int

    def __getitem__(self, n: int) -> int:
        return self.values[n]


def epsilon(params: LiftParams, d: int) -> int:
    return kronecker((-1) ** params.k * params.t, d)


def lift_invert(params: LiftParams, N: int, table: PrimeTable | None = None) -> LiftedStream:
    form = params.eigenform
    if form.precision < N:
        raise InsufficientPrecisionError(
            f"eigenform precision {form.precision} < requested N={N}"
        )
    if table is None or table.limit < N:
        table = sieve(max(N, 2))
    A = form.qexp.coeffs
    # eps(d) d^(k-1) is completely multiplicative, so the Moebius sum only
    # needs its value at primes
    twist = {int(p): epsilon(params, int(p)) * int(p) ** (params.k - 1)
             for p in table.primes_upto(N)}
    values = [0] * (N + 1)
    for n in range(1, N + 1):
        terms = [(1, 1)]
        m = n
        while m > 1:
            p = int(table.spf[m])
            while m % p == 0:
                m //= p
            tw = twist[p]
            terms += [(d * p, -c * tw) for d, c in terms]
        values[n] = sum(c * A[n // d] for d, c in terms)
    return LiftedStream(params, tuple(values), N)


@dataclass
class RelationReport:
    ok: bool
    primes_checked: int
    pairs_checked: int
    prime_failure: int | None = None
    pair_failure: tuple[int, int] | None = None

    def __str__(self):
        if self.ok:
            return f"ok: {self.primes_checked} primes, {self.pairs_checked} coprime pairs"
        if self.prime_failure is not None:
            return f"prime relation fails at p={self.prime_failure}"
        return f"multiplicativity fails at (n, m)={self.pair_failure}"


def _random_coprime_pair(rng: random.Random, N: int) -> tuple[int, int]:
    while True:
        n = rng.randint(2, N // 2)
        m = rng.randint(2, N // n)
        if math.gcd(n, m) == 1:
            return n, m


def verify_relations(stream: LiftedStream, trials: int = 1000, seed: int = 0,
                     table: PrimeTable | None = None) -> RelationReport:
    """Check the prime relation for every p <= N and multiplicativity on random pairs.

    Failure is reported in the returned object, never raised.
    """
    params, N = stream.params, stream.precision
    if table is None or table.limit < N:
        table = sieve(max(N, 2))
    A = params.eigenform.qexp.coeffs
    a = stream.values
    primes = [int(p) for p in table.primes_upto(N)]
    for p in primes:
        if A[p] != a[p] + epsilon(params, p) * p ** (params.k - 1):
            return RelationReport(False, len(primes), 0, prime_failure=p)
    rng = random.Random(seed)
    if N < 6:
        trials = 0
    for i in range(trials):
        n, m = _random_coprime_pair(rng, N)
        if a[n * m] * a[1] != a[n] * a[m]:
            return RelationReport(False, len(primes), i + 1, pair_failure=(n, m))
    return RelationReport(True, len(primes), trials)


def sign(v: int) -> int:
    return (v > 0) - (v < 0)


def write_stream_csv(stream: LiftedStream, path_or_file) -> None:
    p = stream.params
    own = isinstance(path_or_file, (str, Path))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        fh.write(f"# t={p.t} k={p.k} weight2k={2 * p.k} N={stream.precision}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "a_tn2", "sign"])
        for n in range(1, stream.precision + 1):
            v = stream.values[n]
            w.writerow([n, v, sign(v)])
    finally:
        if own:
            fh.close()


def read_stream_csv(path: str | Path) -> tuple[dict, list[int]]:
    """Return (header fields, values) with values[0] = 0 as in LiftedStream."""
    with open(path) as fh:
        header = fh.readline().lstrip("#").split()
        meta = {key: int(v) for key, v in (item.split("=") for item in header)}
        rows = csv.DictReader(fh)
        values = [0]
        for row in rows:
            values.append(int(row["a_tn2"]))
    return meta, values


def synthetic_stream(values, t: int = 1, k: int = 6) -> LiftedStream:
    """Stream with hand-chosen a(t n^2) values, for tests of downstream statistics.

    The attached eigenform is a placeholder of matching weight with A(1)=1 only.
    """
    vals = [0] + [int(v) for v in values]
    N = len(vals) - 1
    form = Eigenform(2 * k, QSeries.from_list([0, 1], N))
    return LiftedStream(LiftParams(t, k, form), tuple(vals), N)
