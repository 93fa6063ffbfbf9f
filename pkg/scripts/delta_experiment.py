"""Full Delta pipeline at one precision: sign statistics, prime sets, Sato-Tate.

    python scripts/delta_experiment.py --nmax 1e6
"""

import argparse
import math
import time

from signlift.arith import sieve
from signlift.densities import exceptional_primes, prime_partition, sato_tate_histogram
from signlift.qseries import level1_eigenform
from signlift.shimura import LiftParams, lift_invert, verify_relations
from signlift.signstats import (
    equidistribution_ratio,
    halasz_bound,
    mean_value,
    nonzero_density,
    running_stats,
    sign_series,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=lambda s: int(float(s)), default=10**5)
    ap.add_argument("--weight", type=int, default=12)
    ap.add_argument("--t", type=int, default=1)
    ap.add_argument("--C", type=float, default=10.0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    table = sieve(args.nmax)
    form = level1_eigenform(args.weight, args.nmax)
    t1 = time.perf_counter()
    stream = lift_invert(LiftParams.for_form(form, args.t), args.nmax, table)
    t2 = time.perf_counter()
    print(f"eigenform {t1 - t0:.1f}s, lift {t2 - t1:.1f}s")
    print("relations:", verify_relations(stream, 10_000, table=table))

    g = sign_series(stream)
    cps = [10**e for e in range(2, int(math.log10(args.nmax)) + 1)]
    print(f"{'x':>9} {'S':>7} {'ratio_pos':>10} {'mean':>10} {'nonzero':>8} {'|S|/bound':>10}")
    for s in running_stats(g, cps, table):
        print(f"{s.x:>9} {s.S:>7} {equidistribution_ratio(s)[0]:>10.5f} "
              f"{mean_value(s):>10.6f} {nonzero_density(s):>8.4f} "
              f"{abs(s.S) / halasz_bound(s, args.C):>10.2e}")

    part = prime_partition(stream, args.nmax, table)
    print("prime sign fractions:", {k: round(v, 5) for k, v in part.fractions().items()})
    exc = exceptional_primes(form, args.weight // 2, args.nmax, args.t, table)
    print(f"A(p) = +-p^(k-1): {exc.hits or 'none'} (excluded primes {exc.excluded_primes})")
    h = sato_tate_histogram(form, args.nmax, 20, table)
    print(f"Sato-Tate sup CDF deviation over {h.n_primes} primes: {h.sup_deviation:.4f}")


if __name__ == "__main__":
    main()
