"""Exact truncated q-series over Python integers, and level-1 eigenforms.

Products use Kronecker substitution: both operands are packed into one big
integer at a power of two wide enough that no coefficient of the product can
overflow its slot, multiplied once (GMP via gmpy2 when available), and
unpacked with signed-digit recovery.  Every coefficient stays an exact int.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int

# below this length schoolbook convolution beats packing
_SCHOOLBOOK_CUTOFF = 32

# weight 2k -> exponents (i, j) with the cusp form equal to delta * E4^i * E6^j
LEVEL1_WEIGHTS = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}


@dataclass(frozen=True)
class QSeries:
    """Truncated power series sum_{n<=precision} coeffs[n] q^n."""

    coeffs: tuple[int, ...]
    precision: int

    def __post_init__(self):
        if self.precision < 0:
            raise ValueError("precision must be >= 0")
        if len(self.coeffs) != self.precision + 1:
            raise ValueError(
                f"expected {self.precision + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_list(cls, coeffs: Iterable[int], precision: int | None = None) -> "QSeries":
        """Build from any iterable; pads with zeros or truncates to ``precision``."""
        c = [int(v) for v in coeffs]
        if precision is None:
            precision = len(c) - 1
        c = c[: precision + 1]
        c.extend([0] * (precision + 1 - len(c)))
        return cls(tuple(c), precision)

    @classmethod
    def one(cls, precision: int) -> "QSeries":
        return cls.from_list([1], precision)

    @classmethod
    def zero(cls, precision: int) -> "QSeries":
        return cls.from_list([], precision)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, precision: int) -> "QSeries":
        if precision > self.precision:
            raise ValueError("cannot raise precision of a truncated series")
        return QSeries(self.coeffs[: precision + 1], precision)

    def __add__(self, other: "QSeries") -> "QSeries":
        return series_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return series_add(self, other.scale(-1))

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        return series_pow(self, e)

    def scale(self, c: int) -> "QSeries":
        return QSeries(tuple(c * v for v in self.coeffs), self.precision)

    def shift(self, s: int) -> "QSeries":
        """Multiply by q^s, keeping the same precision."""
        if s < 0:
            raise ValueError("shift must be nonnegative")
        return QSeries.from_list([0] * s + list(self.coeffs), self.precision)

    def exact_div(self, d: int) -> "QSeries":
        """Divide every coefficient by ``d``; raises if any division is inexact."""
        out = []
        for n, v in enumerate(self.coeffs):
            q, r = divmod(v, d)
            if r:
                raise ArithmeticError(f"coefficient {n} not divisible by {d}")
            out.append(q)
        return QSeries(tuple(out), self.precision)


def series_add(a: QSeries, b: QSeries) -> QSeries:
    prec = min(a.precision, b.precision)
    return QSeries(tuple(x + y for x, y in zip(a.coeffs[: prec + 1], b.coeffs)), prec)


def _schoolbook(a: Sequence[int], b: Sequence[int], prec: int) -> list[int]:
    out = [0] * (prec + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), prec + 1 - i)):
                out[i + j] += x * b[j]
    return out


def _pack(c: Sequence[int], nbytes: int):
    pos = bytearray(nbytes * len(c))
    neg = bytearray(nbytes * len(c))
    for i, v in enumerate(c):
        if v > 0:
            pos[i * nbytes:(i + 1) * nbytes] = v.to_bytes(nbytes, "little")
        elif v < 0:
            neg[i * nbytes:(i + 1) * nbytes] = (-v).to_bytes(nbytes, "little")
    return _bigint(int.from_bytes(pos, "little")) - _bigint(int.from_bytes(neg, "little"))


def _unpack(value, nbytes: int, count: int) -> list[int]:
    bits = 8 * nbytes
    raw = int(value % (_bigint(1) << (bits * count))).to_bytes(nbytes * count, "little")
    half, full = 1 << (bits - 1), 1 << bits
    out = []
    carry = 0
    for i in range(count):
        v = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") + carry
        if v >= half:
            v -= full
            carry = 1
        else:
            carry = 0
        out.append(v)
    return out


def _kronecker_mul(a: Sequence[int], b: Sequence[int], prec: int) -> list[int]:
    ma = max(abs(v) for v in a)
    mb = max(abs(v) for v in b)
    if ma == 0 or mb == 0:
        return [0] * (prec + 1)
    # |c_n| <= (prec+1) * ma * mb, plus one sign bit and one bit of slack
    bits = ma.bit_length() + mb.bit_length() + (prec + 1).bit_length() + 2
    nbytes = (bits + 7) // 8
    product = _pack(a, nbytes) * _pack(b, nbytes)
    return _unpack(product, nbytes, prec + 1)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Exact product truncated at the smaller of the two precisions."""
    prec = min(a.precision, b.precision)
    x, y = a.coeffs[: prec + 1], b.coeffs[: prec + 1]
    if min(len(x), len(y)) <= _SCHOOLBOOK_CUTOFF:
        out = _schoolbook(x, y, prec)
    else:
        out = _kronecker_mul(x, y, prec)
    return QSeries(tuple(out), prec)


def series_pow(a: QSeries, e: int) -> QSeries:
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    result = QSeries.one(a.precision)
    base = a
    while e:
        if e & 1:
            result = series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def pentagonal_numbers(limit: int) -> list[tuple[int, int]]:
    """Generalized pentagonal numbers j(3j-1)/2 <= limit with their sign (-1)^j."""
    out = [(0, 1)]
    j = 1
    while True:
        sign = -1 if j & 1 else 1
        found = False
        for m in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if m <= limit:
                out.append((m, sign))
                found = True
        if not found:
            return sorted(out)
        j += 1


def euler_product(N: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) to precision N via Euler's pentagonal theorem."""
    if N < 0:
        raise ValueError("precision must be >= 0")
    c = [0] * (N + 1)
    for m, sign in pentagonal_numbers(N):
        c[m] = sign
    return QSeries(tuple(c), N)


def divisor_sigma_table(N: int, power: int) -> list[int]:
    """sigma_power(n) for 0 <= n <= N (index 0 holds 0)."""
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d ** power
        for m in range(d, N + 1, d):
            sig[m] += dp
    return sig


_EISENSTEIN_CONSTANTS = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}


def eisenstein(weight: int, N: int) -> QSeries:
    """Normalized Eisenstein series E_weight = 1 + c * sum sigma_{w-1}(n) q^n."""
    if weight < 4 or weight % 2:
        raise ValueError(f"Eisenstein weight must be even and >= 4, got {weight}")
    if weight not in _EISENSTEIN_CONSTANTS:
        raise ValueError(f"weight {weight} has non-integral normalization; use 4, 6, 8, 10 or 14")
    c = _EISENSTEIN_CONSTANTS[weight]
    sig = divisor_sigma_table(N, weight - 1)
    return QSeries(tuple([1] + [c * s for s in sig[1:]]), N)


@dataclass(frozen=True)
class Eigenform:
    """Normalized level-1 cusp eigenform of weight 2k with exact q-expansion."""

    weight: int
    qexp: QSeries

    def __post_init__(self):
        if self.weight % 2:
            raise ValueError("integral weight 2k must be even")
        if self.qexp.precision < 1 or self.qexp[0] != 0 or self.qexp[1] != 1:
            raise ValueError("eigenform must have a(0)=0 and a(1)=1")

    @property
    def precision(self) -> int:
        return self.qexp.precision

    @property
    def k(self) -> int:
        return self.weight // 2

    def A(self, n: int) -> int:
        if not 1 <= n <= self.precision:
            raise IndexError(f"A({n}) outside precision {self.precision}")
        return self.qexp[n]


def delta(N: int) -> Eigenform:
    """Ramanujan's Delta = q prod (1-q^n)^24 to precision N."""
    if N < 1:
        raise ValueError("precision must be >= 1")
    eta24 = series_pow(euler_product(N - 1), 24)
    return Eigenform(12, QSeries((0,) + eta24.coeffs, N))


def delta_from_eisenstein(N: int) -> QSeries:
    """Independent route: (E4^3 - E6^2) / 1728."""
    e4, e6 = eisenstein(4, N), eisenstein(6, N)
    return (series_pow(e4, 3) - series_pow(e6, 2)).exact_div(1728)


def level1_eigenform(weight: int, N: int) -> Eigenform:
    """The unique normalized cusp form in the one-dimensional spaces S_weight(SL2(Z))."""
    if weight not in LEVEL1_WEIGHTS:
        raise ValueError(
            f"weight {weight} does not have a one-dimensional cusp space; "
            f"choose from {sorted(LEVEL1_WEIGHTS)}"
        )
    d = delta(N)
    i, j = LEVEL1_WEIGHTS[weight]
    if i == j == 0:
        return d
    f = d.qexp
    if i:
        f = series_mul(f, series_pow(eisenstein(4, N), i))
    if j:
        f = series_mul(f, series_pow(eisenstein(6, N), j))
    return Eigenform(weight, f)


class CacheMismatchError(ValueError):
    pass


def write_coefficient_cache(form: Eigenform, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# eigenform weight={form.weight} precision={form.precision}\n")
        for n in range(1, form.precision + 1):
            fh.write(f"{n}\t{form.qexp[n]}\n")


def read_coefficient_cache(path: str | Path, weight: int, N: int) -> Eigenform:
    """Load a cache file; it must match ``weight`` and cover precision ``N``."""
    with open(path) as fh:
        header = fh.readline().strip()
        fields = dict(
            item.split("=", 1) for item in header.removeprefix("# eigenform").split()
        ) if header.startswith("# eigenform") else {}
        try:
            cached_weight = int(fields["weight"])
            cached_prec = int(fields["precision"])
        except (KeyError, ValueError):
            raise CacheMismatchError(f"malformed cache header: {header!r}") from None
        if cached_weight != weight:
            raise CacheMismatchError(f"cache has weight {cached_weight}, requested {weight}")
        if cached_prec < N:
            raise CacheMismatchError(f"cache has precision {cached_prec}, requested {N}")
        coeffs = [0] * (N + 1)
        for line in fh:
            n_str, value = line.split("\t")
            n = int(n_str)
            if n > N:
                break
            coeffs[n] = int(value)
    return Eigenform(weight, QSeries(tuple(coeffs), N))
