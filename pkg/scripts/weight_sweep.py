"""Sign balance of a(t n^2) and p-level statistics across weights and t."""

import argparse

from signlift.arith import sieve
from signlift.densities import dirichlet_probe, prime_partition, sato_tate_histogram
from signlift.qseries import LEVEL1_WEIGHTS, level1_eigenform
from signlift.shimura import LiftParams, lift_invert, verify_relations
from signlift.signstats import equidistribution_ratio, running_stats, sign_series

ap = argparse.ArgumentParser()
ap.add_argument("--nmax", type=lambda s: int(float(s)), default=20_000)
ap.add_argument("--ts", default="1,2,3,5")
args = ap.parse_args()

N = args.nmax
table = sieve(N)
zgrid = [1.01 + 0.49 * i / 24 for i in range(25)]
print(f"{'weight':>6} {'t':>3} {'ratio_pos':>10} {'P>0':>7} {'P<0':>7} {'P=0':>5} "
      f"{'a(P>0)':>7} {'a(P<0)':>7} {'ST dev':>7}")
for weight in sorted(LEVEL1_WEIGHTS):
    form = level1_eigenform(weight, N)
    st = sato_tate_histogram(form, N, 20, table).sup_deviation
    for t in map(int, args.ts.split(",")):
        stream = lift_invert(LiftParams.for_form(form, t), N, table)
        assert verify_relations(stream, 2000, table=table).ok
        (s,) = running_stats(sign_series(stream), [N], table)
        fr = prime_partition(stream, N, table).fractions()
        dens = [dirichlet_probe(lambda p, sgn=sgn: (stream[p] > 0) - (stream[p] < 0) == sgn,
                                table, zgrid, N).fitted_a_tail for sgn in (1, -1)]
        print(f"{weight:>6} {t:>3} {equidistribution_ratio(s)[0]:>10.5f} {fr['pos']:>7.4f} "
              f"{fr['neg']:>7.4f} {fr['zero']:>5.3f} {dens[0]:>7.3f} {dens[1]:>7.3f} {st:>7.4f}")
