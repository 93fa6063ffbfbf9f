import time

import pytest

from signlift.arith import sieve
from signlift.qseries import delta
from signlift.shimura import LiftParams, lift_invert

N_FULL = 100_000


class DeltaRun:
    def __init__(self, N):
        t0 = time.perf_counter()
        self.table = sieve(N)
        self.form = delta(N)
        self.stream = lift_invert(LiftParams.for_form(self.form), N, self.table)
        self.build_seconds = time.perf_counter() - t0
        self.N = N


@pytest.fixture(scope="session")
def delta_full():
    """Delta, t=1, lifted to n <= 10^5 (shared: the build dominates runtime)."""
    return DeltaRun(N_FULL)


@pytest.fixture(scope="session")
def delta_small():
    return DeltaRun(2000)
