import math

import numpy as np
import pytest

from oracles import is_prime
from signlift.arith import sieve
from signlift.densities import (
    DeligneBoundError,
    dirichlet_probe,
    exceptional_primes,
    normalized_eigenvalues,
    prime_partition,
    reciprocal_prime_sum,
    sato_tate_histogram,
    semicircle_cdf,
)
from signlift.qseries import Eigenform, QSeries, delta, level1_eigenform
from signlift.shimura import synthetic_stream


def test_partition_small(delta_small):
    s = delta_small.stream
    p2 = prime_partition(s, 2)
    assert (len(p2.pos), len(p2.neg), len(p2.zero)) == (0, 1, 0)
    p3 = prime_partition(s, 3)
    assert (p3.pos, p3.neg, p3.zero) == ([3], [2], [])
    with pytest.raises(ValueError):
        prime_partition(s, s.precision + 1)


def test_partition_invariants(delta_small):
    s, table = delta_small.stream, delta_small.table
    part = prime_partition(s, 2000, table)
    assert part.total == table.pi(2000)
    assert all(s[p] > 0 for p in part.pos) and all(s[p] < 0 for p in part.neg)
    assert part.recip_zero == 0.0
    assert sum(part.fractions().values()) == pytest.approx(1.0)


def test_partition_synthetic_zero():
    vals = [1] * 20
    vals[1] = 0  # a(t 2^2)
    part = prime_partition(synthetic_stream(vals), 20)
    assert part.zero == [2] and part.recip_zero == 0.5


def test_exceptional_delta():
    d = delta(10_000)
    rep = exceptional_primes(d, 6, 10_000)
    assert rep.hits == [] and rep.excluded_hits == [] and rep.ratio == 0.0
    assert rep.excluded_primes == [2]
    assert rep.scanned + 1 == sum(1 for p in range(10_001) if is_prime(p))


def test_exceptional_injected():
    c = list(delta(30).qexp.coeffs)
    c[3] = 3**5
    c[5] = -(5**5)
    fake = Eigenform(12, QSeries(tuple(c), 30))
    rep = exceptional_primes(fake, 6, 30, t=1)
    assert rep.hits == [3, 5]
    assert rep.ratio == pytest.approx(2 * math.log(30) ** 1.125 / 30)
    c[2] = 2**5
    rep = exceptional_primes(Eigenform(12, QSeries(tuple(c), 30)), 6, 30)
    assert rep.excluded_hits == [2]
    # t = 3 moves 3 into the excluded list
    rep3 = exceptional_primes(fake, 6, 30, t=3)
    assert rep3.excluded_primes == [2, 3] and rep3.hits == [5]


def test_probe_empty_and_all():
    table = sieve(20_000)
    grid = [1.5, 1.3, 1.1, 1.05]
    empty = dirichlet_probe(lambda p: False, table, grid, 20_000)
    assert empty.partial_sums == [0.0] * 4 and empty.fitted_a == 0.0
    full = dirichlet_probe(lambda p: True, table, grid, 20_000)
    # decreasing z -> non-decreasing sums
    assert all(b >= a for a, b in zip(full.partial_sums, full.partial_sums[1:]))
    assert full.size == table.pi(20_000)


def test_probe_z2_below_prime_zeta():
    table = sieve(100_000)
    prev = 0.0
    for cutoff in (10, 100, 1000, 100_000):
        got = dirichlet_probe(lambda p: True, table, [2.0, 1.5], cutoff).partial_sums[0]
        direct = math.fsum(1 / p**2 for p in range(2, cutoff + 1) if table.is_prime(p))
        assert got == pytest.approx(direct, rel=1e-12)
        assert prev < got <= 0.4523
        prev = got


def test_probe_accepts_collection():
    table = sieve(100)
    a = dirichlet_probe({2, 3}, table, [1.2, 1.8], 100)
    assert a.partial_sums[0] == pytest.approx(2**-1.2 + 3**-1.2)


@pytest.mark.parametrize("grid", [[1.0, 1.5], [1.5], [1.2, 2.5], [1.2, 1.2]])
def test_probe_bad_grid(grid):
    with pytest.raises(ValueError):
        dirichlet_probe(lambda p: True, sieve(100), grid, 100)


def test_probe_all_primes_density_one():
    table = sieve(1_000_000)
    probe = dirichlet_probe(lambda p: True, table, np.linspace(1.01, 1.5, 25), 1_000_000)
    # the raw slope is dragged down by truncation; the corrected fit is not
    assert 0.4 < probe.fitted_a < 1.0
    assert abs(probe.fitted_a_tail - 1.0) <= 0.1


def test_reciprocal_sums():
    table = sieve(10**6)
    assert reciprocal_prime_sum(set(), table, [10, 100]) == [0.0, 0.0]
    two_three = reciprocal_prime_sum({2, 3}, table, [2, 3, 100, 1000])
    assert two_three[0] == 0.5
    assert two_three[1:] == [pytest.approx(5 / 6)] * 3
    cps = [10**3, 10**4, 10**5, 10**6]
    sums = reciprocal_prime_sum(lambda p: True, table, cps)
    diffs = np.diff(sums)
    assert np.all(diffs > 0)
    # Mertens: sum 1/p ~ log log x + 0.2615, so each decade adds log(j+1)/log(j)
    expected = [math.log(math.log(b) / math.log(a)) for a, b in zip(cps, cps[1:])]
    assert diffs == pytest.approx(expected, abs=0.01)


def test_semicircle_cdf():
    assert semicircle_cdf(0.0) == pytest.approx(0.5)
    assert semicircle_cdf(2.0) == 1.0 and semicircle_cdf(-2.0) == 0.0
    from scipy.integrate import quad

    for u in (-1.5, -0.3, 0.7, 1.9):
        mass, _ = quad(lambda v: math.sqrt(4 - v * v) / (2 * math.pi), -2, u)
        assert semicircle_cdf(u) == pytest.approx(mass, abs=1e-10)


def test_sato_tate_small():
    d = delta(5000)
    h = sato_tate_histogram(d, 5000, 10)
    assert sum(h.counts) == h.n_primes == 669
    assert sum(h.expected) == pytest.approx(669)
    assert -2 <= h.u_min and h.u_max <= 2
    assert h.sup_deviation < 0.1


@pytest.mark.parametrize("weight", [16, 18, 20, 22, 26])
def test_deligne_bound_other_weights(weight):
    u = normalized_eigenvalues(level1_eigenform(weight, 2000), 2000)
    assert np.all(np.abs(u) <= 2)


def test_deligne_violation_is_hard_error():
    c = list(delta(10).qexp.coeffs)
    c[7] = 10**6
    with pytest.raises(DeligneBoundError):
        sato_tate_histogram(Eigenform(12, QSeries(tuple(c), 10)), 10, 4)


def test_histogram_csv(tmp_path):
    h = sato_tate_histogram(delta(200), 200, 4)
    path = tmp_path / "h.csv"
    h.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "bin_lo,bin_hi,count,expected"
    assert lines[1].startswith("-2.0,-1.0,")
    assert len(lines) == 5


def test_probe_pos_neg_symmetry(delta_full):
    s, table = delta_full.stream, delta_full.table
    grid = np.linspace(1.01, 1.5, 25)
    pos = dirichlet_probe(lambda p: s[p] > 0, table, grid, 100_000)
    neg = dirichlet_probe(lambda p: s[p] < 0, table, grid, 100_000)
    assert abs(pos.fitted_a - neg.fitted_a) <= 0.1
    assert abs(pos.fitted_a_tail - neg.fitted_a_tail) <= 0.1
