"""Command-line front end: build eigenform, invert the lift, run statistics, emit data.

Exit codes: 0 success, 2 invalid configuration, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import arith, densities, qseries, shimura, signstats

log = logging.getLogger("signlift")

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 2, 3


class ConfigError(ValueError):
    pass


class VerificationError(RuntimeError):
    pass


def _default_checkpoints(nmax: int) -> list[int]:
    out, x = [], 10
    while x <= nmax:
        out.append(x)
        x *= 10
    return out or [nmax]


@dataclass
class ExperimentConfig:
    weight: int = 12
    t: int = 1
    nmax: int = 100_000
    checkpoints: list[int] = field(default_factory=list)
    C: float = 10.0
    bins: int = 20
    out: str = "-"
    format: str = "csv"
    cache: str | None = None
    trials: int = 1000

    def __post_init__(self):
        if not self.checkpoints:
            self.checkpoints = _default_checkpoints(self.nmax)

    def validate(self) -> None:
        if self.weight not in qseries.LEVEL1_WEIGHTS:
            raise ConfigError(f"weight must be one of {sorted(qseries.LEVEL1_WEIGHTS)}")
        if not arith.is_squarefree(self.t):
            raise ConfigError("t must be squarefree")
        if self.nmax < 2:
            raise ConfigError("nmax must be >= 2")
        cps = self.checkpoints
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ConfigError("checkpoints must be strictly increasing")
        if cps[0] < 1 or cps[-1] > self.nmax:
            raise ConfigError(f"checkpoints must lie in [1, nmax={self.nmax}]")
        if not self.C > 0:
            raise ConfigError("C must be positive")
        if self.bins < 2:
            raise ConfigError("bins must be >= 2")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.trials < 0:
            raise ConfigError("trials must be >= 0")
        need = 4 * (self.nmax + 1)
        if need > arith._budget_bytes():
            raise ConfigError(f"nmax={self.nmax} exceeds the sieve memory budget ({arith.BUDGET_ENV})")


def load_eigenform(cfg: ExperimentConfig) -> qseries.Eigenform:
    if cfg.cache and Path(cfg.cache).exists():
        log.info("reading coefficient cache %s", cfg.cache)
        return qseries.read_coefficient_cache(cfg.cache, cfg.weight, cfg.nmax)
    form = qseries.level1_eigenform(cfg.weight, cfg.nmax)
    if cfg.cache:
        qseries.write_coefficient_cache(form, cfg.cache)
    return form


def build_stream(cfg: ExperimentConfig):
    table = arith.sieve(cfg.nmax)
    form = load_eigenform(cfg)
    params = shimura.LiftParams.for_form(form, cfg.t)
    stream = shimura.lift_invert(params, cfg.nmax, table)
    report = shimura.verify_relations(stream, cfg.trials, table=table)
    if not report.ok:
        raise VerificationError(str(report))
    log.info("lift relations %s", report)
    return table, form, stream


@contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump_json(obj, fh) -> None:
    json.dump(obj, fh, indent=2, sort_keys=True)
    fh.write("\n")


def _params(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    for key in ("out", "cache", "format"):
        d.pop(key)
    return d


def cmd_coeffs(cfg: ExperimentConfig) -> int:
    _, _, stream = build_stream(cfg)
    with _output(cfg.out) as fh:
        if cfg.format == "json":
            _dump_json({"params": _params(cfg), "data": [
                {"n": n, "a_tn2": str(v), "sign": shimura.sign(v)}
                for n, v in enumerate(stream.values) if n]}, fh)
        else:
            shimura.write_stream_csv(stream, fh)
    return EXIT_OK


def cmd_equidist(cfg: ExperimentConfig) -> int:
    table, _, stream = build_stream(cfg)
    g = signstats.sign_series(stream)
    rows = signstats.running_stats(g, cfg.checkpoints, table)
    with _output(cfg.out) as fh:
        if cfg.format == "json":
            data = [dict(zip(signstats.STATS_COLUMNS, signstats.stats_row(s, cfg.C)))
                    for s in rows]
            _dump_json({"params": _params(cfg), "data": data}, fh)
        else:
            signstats.write_stats_csv(rows, fh, cfg.C, cfg.t, cfg.weight)
    return EXIT_OK


def cmd_primes(cfg: ExperimentConfig) -> int:
    table, form, stream = build_stream(cfg)
    x = cfg.nmax
    part = densities.prime_partition(stream, x, table)
    exc = densities.exceptional_primes(form, cfg.weight // 2, x, cfg.t, table)
    hist = densities.sato_tate_histogram(form, x, cfg.bins, table)
    if exc.hits:
        log.warning("exceptional primes found: %s", exc.hits)
    zero = set(part.zero)
    recip = densities.reciprocal_prime_sum(zero, table, cfg.checkpoints)
    with _output(cfg.out) as fh:
        if cfg.format == "csv":
            hist.write_csv(fh)
        else:
            _dump_json({"params": _params(cfg), "data": {
                "prime_partition": part.to_dict(),
                "exceptional_primes": exc.to_dict(),
                "reciprocal_sum_zero": dict(zip(map(str, cfg.checkpoints), recip)),
                "sato_tate": hist.to_dict(),
            }}, fh)
    return EXIT_OK


def cmd_probe(cfg: ExperimentConfig, which: str = "all", zmin: float = 1.01,
              zmax: float = 1.5, zpoints: int = 25) -> int:
    if not (1 < zmin < zmax <= 2) or zpoints < 2:
        raise ConfigError("need 1 < zmin < zmax <= 2 and zpoints >= 2")
    table, _, stream = build_stream(cfg)
    selectors = {
        "all": lambda p: True,
        "pos": lambda p: stream.values[p] > 0,
        "neg": lambda p: stream.values[p] < 0,
        "zero": lambda p: stream.values[p] == 0,
    }
    zgrid = np.linspace(zmin, zmax, zpoints)
    probe = densities.dirichlet_probe(selectors[which], table, zgrid, cfg.nmax)
    with _output(cfg.out) as fh:
        _dump_json({"params": {**_params(cfg), "set": which},
                    "data": probe.to_dict()}, fh)
    return EXIT_OK


def _checkpoint_list(s: str) -> list[int]:
    try:
        return [int(float(v)) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--weight", type=int, default=12)
    common.add_argument("--t", type=int, default=1)
    common.add_argument("--nmax", type=lambda s: int(float(s)), default=100_000)
    common.add_argument("--checkpoints", type=_checkpoint_list, default=None,
                        help="comma-separated cutoffs (default: powers of 10 up to nmax)")
    common.add_argument("--C", type=float, default=10.0)
    common.add_argument("--bins", type=int, default=20)
    common.add_argument("--out", default="-")
    common.add_argument("--format", default=None, choices=["csv", "json"])
    common.add_argument("--cache", default=None)
    common.add_argument("--trials", type=int, default=1000,
                        help="random coprime pairs for the multiplicativity check")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="signlift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("coeffs", parents=[common], help="export a(t n^2) as CSV")
    sub.add_parser("equidist", parents=[common], help="sign statistics per checkpoint")
    sub.add_parser("primes", parents=[common], help="prime sign sets, exceptional primes, Sato-Tate")
    probe = sub.add_parser("probe", parents=[common], help="Dirichlet-density diagnostic")
    probe.add_argument("--set", dest="which", default="all", choices=["all", "pos", "neg", "zero"])
    probe.add_argument("--zmin", type=float, default=1.01)
    probe.add_argument("--zmax", type=float, default=1.5)
    probe.add_argument("--zpoints", type=int, default=25)
    return parser


_DEFAULT_FORMAT = {"coeffs": "csv", "equidist": "csv", "primes": "json", "probe": "json"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = ExperimentConfig(
        weight=args.weight, t=args.t, nmax=args.nmax,
        checkpoints=args.checkpoints or [], C=args.C, bins=args.bins, out=args.out,
        format=args.format or _DEFAULT_FORMAT[args.command], cache=args.cache,
        trials=args.trials,
    )
    try:
        cfg.validate()
        if args.command == "coeffs":
            return cmd_coeffs(cfg)
        if args.command == "equidist":
            return cmd_equidist(cfg)
        if args.command == "primes":
            return cmd_primes(cfg)
        return cmd_probe(cfg, args.which, args.zmin, args.zmax, args.zpoints)
    except (ConfigError, qseries.CacheMismatchError) as exc:
        print(f"signlift: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (VerificationError, densities.DeligneBoundError) as exc:
        print(f"signlift: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
