"""Exact q-series, Shimura-lift inversion and sign statistics of a(t n^2)."""

from .arith import PrimeTable, divisors, kronecker, mobius, sieve
from .densities import (
    dirichlet_probe,
    exceptional_primes,
    prime_partition,
    reciprocal_prime_sum,
    sato_tate_histogram,
    semicircle_cdf,
)
from .qseries import (
    Eigenform,
    QSeries,
    delta,
    eisenstein,
    euler_product,
    level1_eigenform,
    series_mul,
    series_pow,
)
from .shimura import LiftedStream, LiftParams, epsilon, lift_invert, verify_relations
from .signstats import (
    RunningStats,
    SignSeries,
    equidistribution_ratio,
    halasz_bound,
    mean_value,
    nonzero_density,
    running_stats,
    sign_series,
)

__version__ = "0.1.0"
