"""Sign function g(n) = sign a(t n^2), its partial sums and the Halasz-type envelope."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .arith import PrimeTable, sieve
from .shimura import LiftedStream


class UndefinedRatioError(ArithmeticError):
    """No nonzero g(n) up to the cutoff, so the sign ratio is undefined."""


@dataclass(frozen=True, eq=False)
class SignSeries:
    """values[n] = g(n) in {-1, 0, 1} for 1 <= n <= precision (values[0] unused)."""

    values: np.ndarray
    source: str

    @property
    def precision(self) -> int:
        return len(self.values) - 1

    @property
    def synthetic(self) -> bool:
        return self.source.startswith("synthetic")

    def __getitem__(self, n):
        return int(self.values[n])


def sign_series(stream: LiftedStream) -> SignSeries:
    g = np.fromiter(((v > 0) - (v < 0) for v in stream.values), dtype=np.int8,
                    count=len(stream.values))
    g[0] = 0
    g.flags.writeable = False
    p = stream.params
    return SignSeries(g, f"lift:t={p.t},weight={2 * p.k}")


def synthetic_series(values: Sequence[int], tag: str = "") -> SignSeries:
    g = np.zeros(len(values) + 1, dtype=np.int8)
    g[1:] = values
    if np.any(np.abs(g) > 1):
        raise ValueError("sign values must lie in {-1, 0, 1}")
    g.flags.writeable = False
    return SignSeries(g, f"synthetic:{tag}" if tag else "synthetic")


@dataclass(frozen=True)
class RunningStats:
    x: int
    S: int
    n_pos: int
    n_neg: int
    n_zero: int
    prime_exponent_sum: float
    zero_prime_sum: float

    def merge(self, later: "RunningStats") -> "RunningStats":
        """Combine with the stats of the block that directly follows this one."""
        return RunningStats(
            later.x,
            self.S + later.S,
            self.n_pos + later.n_pos,
            self.n_neg + later.n_neg,
            self.n_zero + later.n_zero,
            self.prime_exponent_sum + later.prime_exponent_sum,
            self.zero_prime_sum + later.zero_prime_sum,
        )


_EMPTY = RunningStats(0, 0, 0, 0, 0, 0.0, 0.0)


def _block(g: np.ndarray, primes: np.ndarray, lo: int, hi: int) -> RunningStats:
    """Stats over lo < n <= hi; x is set to hi."""
    seg = g[lo + 1 : hi + 1]
    n_pos = int(np.count_nonzero(seg > 0))
    n_neg = int(np.count_nonzero(seg < 0))
    ps = primes[(primes > lo) & (primes <= hi)]
    gp = g[ps]
    # 1 - g(p) >= 0 term by term, so fsum is well conditioned
    exponent = math.fsum((1 - int(v)) / int(p) for p, v in zip(ps, gp) if v != 1)
    zero = math.fsum(1 / int(p) for p in ps[gp == 0])
    return RunningStats(hi, n_pos - n_neg, n_pos, n_neg, hi - lo - n_pos - n_neg,
                        exponent, zero)


def running_stats(g: SignSeries, checkpoints: Sequence[int],
                  table: PrimeTable | None = None, workers: int = 1,
                  block_size: int = 1 << 14) -> list[RunningStats]:
    """Cumulative stats at each checkpoint.

    With ``workers > 1`` the range is cut into blocks that are accumulated
    concurrently and merged in order; integer fields are identical to the
    sequential pass.
    """
    cps = list(checkpoints)
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    if cps and (cps[0] < 1 or cps[-1] > g.precision):
        raise ValueError(f"checkpoints must lie in [1, {g.precision}]")
    if not cps:
        return []
    if table is None or table.limit < cps[-1]:
        table = sieve(max(cps[-1], 2))
    primes = table.primes_upto(cps[-1])

    cuts = sorted(set(cps) | (set(range(block_size, cps[-1], block_size)) if workers > 1 else set()))
    bounds = list(zip([0] + cuts[:-1], cuts))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(lambda b: _block(g.values, primes, *b), bounds))
    else:
        blocks = [_block(g.values, primes, lo, hi) for lo, hi in bounds]

    wanted = set(cps)
    out = []
    acc = _EMPTY
    for b in blocks:
        acc = acc.merge(b)
        if acc.x in wanted:
            out.append(acc)
    return out


def halasz_bound(stats: RunningStats, C: float = 10.0) -> float:
    """C x exp(-1/4 sum_{p<=x} (1 - g(p))/p), to be compared with |S(x)|."""
    if stats.x < 2:
        raise ValueError("the bound is stated for x >= 2")
    if C <= 0:
        raise ValueError("C must be positive")
    return C * stats.x * math.exp(-0.25 * stats.prime_exponent_sum)


def equidistribution_ratio(stats: RunningStats) -> tuple[float, float]:
    nonzero = stats.n_pos + stats.n_neg
    if nonzero == 0:
        raise UndefinedRatioError(f"g vanishes on all n <= {stats.x}")
    return stats.n_pos / nonzero, stats.n_neg / nonzero


def mean_value(stats: RunningStats) -> float:
    return stats.S / stats.x


def nonzero_density(stats: RunningStats) -> float:
    return (stats.n_pos + stats.n_neg) / stats.x


STATS_COLUMNS = ["x", "S", "n_pos", "n_neg", "n_zero", "ratio_pos", "mean", "halasz_bound"]


def stats_row(stats: RunningStats, C: float) -> list:
    try:
        ratio = repr(equidistribution_ratio(stats)[0])
    except UndefinedRatioError:
        ratio = ""
    bound = repr(halasz_bound(stats, C)) if stats.x >= 2 else ""
    return [stats.x, stats.S, stats.n_pos, stats.n_neg, stats.n_zero, ratio,
            repr(mean_value(stats)), bound]


def write_stats_csv(rows: Sequence[RunningStats], path_or_file, C: float,
                    t: int, weight: int) -> None:
    own = isinstance(path_or_file, (str, Path))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        fh.write(f"# C={C} t={t} weight={weight}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STATS_COLUMNS)
        for s in rows:
            w.writerow(stats_row(s, C))
    finally:
        if own:
            fh.close()
