"""Prime sign sets, the exceptional primes A(p) = +-p^(k-1), Dirichlet-density
diagnostics and the Sato-Tate comparison."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import exp1

from .arith import PrimeTable, sieve
from .qseries import Eigenform
from .shimura import LiftedStream

PrimeSet = Callable[[int], bool] | Iterable[int]


def _as_predicate(s: PrimeSet) -> Callable[[int], bool]:
    if callable(s):
        return s
    members = frozenset(int(p) for p in s)
    return members.__contains__


def _ensure_table(table: PrimeTable | None, x: int) -> PrimeTable:
    if table is None or table.limit < x:
        return sieve(max(x, 2))
    return table


@dataclass
class PrimePartition:
    x: int
    pos: list[int] = field(repr=False)
    neg: list[int] = field(repr=False)
    zero: list[int]
    recip_zero: float

    @property
    def total(self) -> int:
        return len(self.pos) + len(self.neg) + len(self.zero)

    def fractions(self) -> dict[str, float]:
        n = self.total
        if n == 0:
            return {"pos": 0.0, "neg": 0.0, "zero": 0.0}
        return {"pos": len(self.pos) / n, "neg": len(self.neg) / n, "zero": len(self.zero) / n}

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "pi_x": self.total,
            "count_pos": len(self.pos),
            "count_neg": len(self.neg),
            "count_zero": len(self.zero),
            "fractions": self.fractions(),
            "zero_primes": self.zero,
            "recip_zero": self.recip_zero,
        }


def prime_partition(stream: LiftedStream, x: int,
                    table: PrimeTable | None = None) -> PrimePartition:
    """Split the primes p <= x by the sign of a(t p^2)."""
    if not 1 <= x <= stream.precision:
        raise ValueError(f"cutoff {x} outside [1, {stream.precision}]")
    table = _ensure_table(table, x)
    pos, neg, zero = [], [], []
    for p in table.primes_upto(x):
        p = int(p)
        v = stream.values[p]
        (pos if v > 0 else neg if v < 0 else zero).append(p)
    return PrimePartition(x, pos, neg, zero, math.fsum(1 / p for p in zero))


@dataclass
class ExceptionalReport:
    x: int
    k: int
    t: int
    hits: list[int]
    excluded_primes: list[int]
    excluded_hits: list[int]
    scanned: int

    @property
    def count(self) -> int:
        return len(self.hits)

    @property
    def ratio(self) -> float:
        """count / (x / log(x)^(9/8))."""
        if self.count == 0:
            return 0.0
        return self.count * math.log(self.x) ** 1.125 / self.x

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(count=self.count, ratio=self.ratio)
        return d


def exceptional_primes(F: Eigenform, k: int, x: int, t: int = 1,
                       table: PrimeTable | None = None) -> ExceptionalReport:
    """Primes p <= x with A(p) = +-p^(k-1), compared exactly.

    Primes dividing 2t are scanned too but reported separately.
    """
    if not 2 <= x <= F.precision:
        raise ValueError(f"cutoff {x} outside [2, {F.precision}]")
    table = _ensure_table(table, x)
    hits, excluded, excluded_hits = [], [], []
    scanned = 0
    for p in table.primes_upto(x):
        p = int(p)
        hit = abs(F.A(p)) == p ** (k - 1)
        if (2 * t) % p == 0:
            excluded.append(p)
            if hit:
                excluded_hits.append(p)
        else:
            scanned += 1
            if hit:
                hits.append(p)
    return ExceptionalReport(x, k, t, hits, excluded, excluded_hits, scanned)


@dataclass
class DensityProbe:
    """Diagnostic only: truncated sums can never certify weak regularity.

    ``fitted_a`` is the least-squares slope of the partial sums against
    log(1/(z-1)).  ``fitted_a_tail`` regresses instead on
    log(1/(z-1)) - E1((z-1) log cutoff), the part of log(1/(z-1)) that the
    primes up to the cutoff account for under the prime number theorem,
    with the bounded remainder modelled as b + c (z-1).
    """

    cutoff: int
    size: int
    zgrid: list[float]
    partial_sums: list[float]
    fitted_a: float
    fitted_a_tail: float

    def to_dict(self) -> dict:
        return asdict(self)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    if not np.any(y):
        return 0.0
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def _tail_fit(h: np.ndarray, z: np.ndarray, y: np.ndarray) -> float:
    if not np.any(y):
        return 0.0
    design = np.column_stack([h, np.ones_like(z), z - 1.0])
    if len(z) < 3:
        design = design[:, :2]
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(coef[0])


def dirichlet_probe(prime_set: PrimeSet, table: PrimeTable, zgrid: Sequence[float],
                    cutoff: int) -> DensityProbe:
    z = np.asarray(zgrid, dtype=float)
    if z.ndim != 1 or len(z) < 2 or np.any(z <= 1) or np.any(z > 2):
        raise ValueError("zgrid needs at least two values in (1, 2]")
    if len(np.unique(z)) != len(z):
        raise ValueError("zgrid values must be distinct")
    if cutoff > table.limit:
        raise ValueError(f"cutoff {cutoff} exceeds sieve limit {table.limit}")
    pred = _as_predicate(prime_set)
    members = np.array([p for p in table.primes_upto(cutoff) if pred(int(p))], dtype=float)
    logp = np.log(members)
    sums = np.array([float(np.sum(np.exp(-zi * logp))) for zi in z])
    X = np.log(1.0 / (z - 1.0))
    H = X - exp1((z - 1.0) * math.log(cutoff))
    return DensityProbe(cutoff, len(members), z.tolist(), sums.tolist(),
                        _slope(X, sums), _tail_fit(H, z, sums))


def reciprocal_prime_sum(prime_set: PrimeSet, table: PrimeTable,
                         checkpoints: Sequence[int]) -> list[float]:
    """sum_{p in S, p <= x} 1/p at each checkpoint x."""
    cps = list(checkpoints)
    if any(b < a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be non-decreasing")
    if cps and cps[-1] > table.limit:
        raise ValueError(f"checkpoint {cps[-1]} exceeds sieve limit {table.limit}")
    pred = _as_predicate(prime_set)
    out = []
    terms: list[float] = []
    it = iter(table.primes)
    pending = next(it, None)
    for x in cps:
        while pending is not None and pending <= x:
            if pred(int(pending)):
                terms.append(1.0 / int(pending))
            pending = next(it, None)
        out.append(math.fsum(terms))
    return out


def semicircle_cdf(u):
    """CDF of the Sato-Tate measure (1/(2 pi)) sqrt(4 - u^2) du on [-2, 2]."""
    u = np.clip(np.asarray(u, dtype=float), -2.0, 2.0)
    return 0.5 + (u * np.sqrt(4.0 - u * u) / 4.0 + np.arcsin(u / 2.0)) / np.pi


class DeligneBoundError(ArithmeticError):
    pass


@dataclass
class SatoTateHistogram:
    x: int
    n_primes: int
    edges: list[float]
    counts: list[int]
    expected: list[float]
    sup_deviation: float
    u_min: float
    u_max: float

    def to_dict(self) -> dict:
        return asdict(self)

    def write_csv(self, path_or_file) -> None:
        own = isinstance(path_or_file, (str, Path))
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_lo", "bin_hi", "count", "expected"])
            for lo, hi, c, e in zip(self.edges, self.edges[1:], self.counts, self.expected):
                w.writerow([repr(lo), repr(hi), c, repr(e)])
        finally:
            if own:
                fh.close()


def normalized_eigenvalues(F: Eigenform, x: int, table: PrimeTable | None = None) -> np.ndarray:
    """u_p = A(p) / p^((2k-1)/2) for p <= x, after an exact Deligne-bound check."""
    table = _ensure_table(table, x)
    w = F.weight - 1
    u = []
    for p in table.primes_upto(x):
        p = int(p)
        a = F.A(p)
        if a * a > 4 * p**w:
            raise DeligneBoundError(f"|A({p})| exceeds 2 p^({w}/2): coefficient bug")
        u.append(a / math.sqrt(p) ** w)
    # float rounding may nudge a value sitting on the bound past it
    return np.clip(np.array(u), -2.0, 2.0)


def sato_tate_histogram(F: Eigenform, x: int, bins: int = 20,
                        table: PrimeTable | None = None) -> SatoTateHistogram:
    if not 2 <= x <= F.precision:
        raise ValueError(f"cutoff {x} outside [2, {F.precision}]")
    if bins < 2:
        raise ValueError("need at least 2 bins")
    u = np.sort(normalized_eigenvalues(F, x, table))
    n = len(u)
    edges = np.linspace(-2.0, 2.0, bins + 1)
    counts, _ = np.histogram(u, bins=edges)
    cdf = semicircle_cdf(edges)
    empirical = np.searchsorted(u, edges, side="right") / n
    return SatoTateHistogram(
        x, n, edges.tolist(), counts.astype(int).tolist(),
        (n * np.diff(cdf)).tolist(),
        float(np.max(np.abs(empirical - cdf))),
        float(u[0]), float(u[-1]),
    )
