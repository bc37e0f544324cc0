"""The elliptic eigenform behind a Saito-Kurokawa lift, and its coefficient cache.

For Siegel weight k in {10, 12, 14} the space S_{2k-2}(SL_2(Z)) is
one-dimensional, so the normalised eigenform is simply Delta * E_{2k-14}.
"""
from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path
from typing import Mapping

from .errors import CacheError, ConfigError, RangeError, VerificationError
from .hpreal import DEFAULT_BITS, HighPrecisionReal
from .numeric import (
    DenseSeries,
    chunked,
    factorize,
    pentagonal_series,
    pmap,
    series_coeff,
    series_mul,
    series_mul_sparse,
    sieve_primes,
    sigma_table,
)

log = logging.getLogger(__name__)

SUPPORTED_K = (10, 12, 14)

# weight -> (-2w/B_w, w-1)
_EISENSTEIN = {4: (240, 3), 6: (-504, 5), 10: (-264, 9), 14: (-24, 13)}

CACHE_MAGIC = "# skmaass-cache v1"
PRIMES_MAGIC = "# skmaass-primes v1"


def check_weight(k: int) -> int:
    """Validate a Siegel weight and return the elliptic weight 2k - 2."""
    if k not in SUPPORTED_K:
        raise ConfigError(
            f"unsupported Siegel weight k={k}: only k in {{10, 12, 14}} are supported, "
            "where S_{2k-2} is one-dimensional and the eigenform has rational integer coefficients"
        )
    return 2 * k - 2


def build_delta(N: int) -> DenseSeries:
    """Delta = q prod (1 - q^n)^24 through q^N, by 24 sparse pentagonal passes."""
    if N < 1:
        raise ValueError("N must be >= 1")
    pent = pentagonal_series(N - 1)
    acc = DenseSeries.one(N - 1)
    for _ in range(24):
        acc = series_mul_sparse(acc, pent)
    return DenseSeries.from_list([0] + acc.tolist())


def build_eisenstein(weight: int, N: int, via_product: bool = False) -> DenseSeries:
    """Normalised Eisenstein series E_weight through q^N.

    By default every weight comes from its divisor-sum formula.  With
    ``via_product`` the weights 10 and 14 are instead assembled as E4*E6 and
    E4^2*E6, which is O(N^2) and meant for cross-checks.
    """
    if weight not in _EISENSTEIN:
        raise ValueError(f"unsupported Eisenstein weight {weight}; expected one of {sorted(_EISENSTEIN)}")
    if via_product and weight in (10, 14):
        E4, E6 = build_eisenstein(4, N), build_eisenstein(6, N)
        out = series_mul(E4, E6)
        return series_mul(E4, out) if weight == 14 else out
    c, r = _EISENSTEIN[weight]
    sig = sigma_table(r, N)
    return DenseSeries.from_list([1] + [c * s for s in sig[1:]])


@dataclass(frozen=True)
class PrimePowerCoeffs:
    p: int
    values: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, m: int) -> int:
        return self.values[m]


@dataclass(frozen=True, eq=True)
class CoefficientTable:
    """Exact a(1..N) of the weight 2k-2 eigenform, optionally with a(p) for
    primes up to ``prime_limit`` beyond N."""

    k: int
    values: tuple[int, ...]
    extra_primes: Mapping[int, int] = field(default_factory=dict, compare=True, hash=False)
    prime_limit: int = 0

    def __post_init__(self):
        check_weight(self.k)
        if len(self.values) < 2 or self.values[1] != 1:
            raise ValueError("coefficient table must start with a(1) = 1")
        if self.prime_limit < self.N:
            object.__setattr__(self, "prime_limit", self.N)

    __hash__ = None  # type: ignore[assignment]

    @property
    def w(self) -> int:
        return 2 * self.k - 2

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def a(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise RangeError(f"a({n}) outside stored range 1..{self.N}")
        return self.values[n]

    def ap(self, p: int) -> int:
        if p <= self.N:
            return self.values[p]
        try:
            return self.extra_primes[p]
        except KeyError:
            raise RangeError(f"a({p}) unavailable: prime exceeds coefficient range {self.prime_limit}") from None

    def truncate(self, N: int) -> CoefficientTable:
        if N > self.N:
            raise RangeError(f"cannot truncate a table of size {self.N} to {N}")
        extra = {p: self.values[p] for p in sieve_primes(self.N).upto(self.N) if p > N}
        extra.update(self.extra_primes)
        limit = max(self.prime_limit, N)
        return CoefficientTable(self.k, self.values[: N + 1], extra if limit > N else {}, limit)


# -- construction -----------------------------------------------------------

# Forked workers read the series from here instead of having them pickled.
_SHARED: dict[str, DenseSeries] = {}


def _coeff_block(indices: list[int]) -> list[tuple[int, int]]:
    delta, eis = _SHARED["delta"], _SHARED["eis"]
    return [(n, series_coeff(delta, eis, n, start=1)) for n in indices]


def _convolve_at(k: int, limit: int, indices: list[int], jobs: int) -> dict[int, int]:
    w = check_weight(k)
    _SHARED["delta"] = build_delta(limit)
    _SHARED["eis"] = build_eisenstein(w - 12, limit)
    try:
        blocks = pmap(_coeff_block, chunked(indices, 4 * jobs if jobs > 1 else 1), jobs)
    finally:
        _SHARED.clear()
    return dict(pair for block in blocks for pair in block)


def build_eigenform(k: int, N: int, jobs: int = 1) -> CoefficientTable:
    """Full table a(1..N) by direct convolution of Delta and E_{2k-14}."""
    check_weight(k)
    if N < 2:
        raise ValueError("N must be >= 2")
    found = _convolve_at(k, N, list(range(1, N + 1)), jobs)
    return CoefficientTable(k, (0,) + tuple(found[n] for n in range(1, N + 1)))


def prime_coefficients(k: int, limit: int, jobs: int = 1, above: int = 0) -> dict[int, int]:
    """a(p) for primes ``above < p <= limit`` via the per-coefficient path."""
    primes = [p for p in sieve_primes(limit) if p > above]
    if not primes:
        return {}
    log.info("extracting %d prime-indexed coefficients up to %d (k=%d)", len(primes), limit, k)
    return _convolve_at(k, limit, primes, jobs)


def extend_primes(table: CoefficientTable, prime_limit: int, jobs: int = 1) -> CoefficientTable:
    if prime_limit <= table.prime_limit:
        return table
    extra = dict(table.extra_primes)
    extra.update(prime_coefficients(table.k, prime_limit, jobs, above=table.prime_limit))
    return CoefficientTable(table.k, table.values, extra, prime_limit)


def coeff_prime_power(table: CoefficientTable, p: int, M: int) -> PrimePowerCoeffs:
    """a(p^0..p^M) from a(p) by the Hecke recursion."""
    if M < 0:
        raise ValueError("M must be >= 0")
    ap = table.ap(p)
    pw = p ** (table.w - 1)
    vals = [1, ap]
    for _ in range(1, M):
        vals.append(ap * vals[-1] - pw * vals[-2])
    return PrimePowerCoeffs(p, tuple(vals[: M + 1]))


def coeff(table: CoefficientTable, n: int) -> int:
    """a(n) by multiplicativity over the factorisation of n."""
    out = 1
    for p, e in factorize(n):
        out *= coeff_prime_power(table, p, e)[e]
    return out


def normalized_b(table: CoefficientTable, p: int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
    """b(p) = a(p) / p^{k-3/2}, which Deligne puts in [-2, 2]."""
    a = table.ap(p)
    mag = (a * a * p) << (2 * bits)
    mant = isqrt(mag) // p ** (table.k - 1)
    return HighPrecisionReal(mant if a >= 0 else -mant, 2, bits)


@dataclass(frozen=True)
class DeligneReport:
    checked: int
    tightest: tuple[tuple[int, float], ...]  # (n, 1 - |a(n)| / bound), smallest margins first


def deligne_check(table: CoefficientTable, keep: int = 5) -> DeligneReport:
    """Assert |a(n)| <= d(n) n^{(w-1)/2} for every stored coefficient."""
    d = sigma_table(0, table.N)
    e = table.w - 1
    items = [(n, table.values[n]) for n in range(2, table.N + 1)]
    items += sorted(table.extra_primes.items())
    margins = []
    for n, a in items:
        dn = d[n] if n <= table.N else 2
        bound_sq = dn * dn * n**e
        if a * a > bound_sq:
            raise VerificationError(f"Deligne bound violated at n={n}: a(n)={a}")
        margins.append((1.0 - (a * a / bound_sq) ** 0.5, n))
    margins.sort()
    return DeligneReport(len(items), tuple((n, m) for m, n in margins[:keep]))


# -- cache ------------------------------------------------------------------


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_cache(table: CoefficientTable) -> str:
    lines = [CACHE_MAGIC, f"# k={table.k} w={table.w} N={table.N}"]
    lines += [f"{n}\t{table.values[n]}" for n in range(1, table.N + 1)]
    return "\n".join(lines) + "\n"


def write_cache(table: CoefficientTable, path: str | os.PathLike) -> Path:
    path = Path(path)
    _atomic_write(path, format_cache(table))
    return path


def _parse_header(line: str, expected: tuple[str, ...]) -> dict[str, int]:
    parts = line.split()
    if not parts or parts[0] != "#" or len(parts) != len(expected) + 1:
        raise CacheError(f"malformed cache header: {line!r}")
    out = {}
    for part, key in zip(parts[1:], expected):
        name, _, val = part.partition("=")
        if name != key or not val.isdigit():
            raise CacheError(f"malformed cache header: {line!r}")
        out[key] = int(val)
    return out


def _parse_pairs(lines: list[str], where: Path) -> list[tuple[int, int]]:
    out = []
    for i, line in enumerate(lines, start=3):
        idx, sep, val = line.partition("\t")
        try:
            out.append((int(idx), int(val)))
        except ValueError:
            raise CacheError(f"{where}:{i}: malformed entry {line!r}") from None
        if not sep:
            raise CacheError(f"{where}:{i}: malformed entry {line!r}")
    return out


def read_cache(path: str | os.PathLike, k: int | None = None, N: int | None = None) -> CoefficientTable:
    """Load a cache file; header must match ``k`` and cover ``N`` entries."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or lines[0] != CACHE_MAGIC:
        raise CacheError(f"{path}: not a skmaass v1 coefficient cache")
    head = _parse_header(lines[1], ("k", "w", "N"))
    if head["w"] != 2 * head["k"] - 2:
        raise CacheError(f"{path}: inconsistent header {lines[1]!r}")
    if k is not None and head["k"] != k:
        raise CacheError(f"{path}: cache is for k={head['k']}, wanted k={k}")
    if N is not None and head["N"] < N:
        raise CacheError(f"{path}: cache holds N={head['N']}, wanted N={N}")
    pairs = _parse_pairs(lines[2:], path)
    if [n for n, _ in pairs] != list(range(1, head["N"] + 1)):
        raise CacheError(f"{path}: entries are not exactly n = 1..{head['N']}")
    try:
        table = CoefficientTable(head["k"], (0,) + tuple(v for _, v in pairs))
    except (ValueError, ConfigError) as exc:
        raise CacheError(f"{path}: {exc}") from exc
    return table.truncate(N) if N is not None and N < table.N else table


def write_prime_cache(k: int, limit: int, coeffs: Mapping[int, int], path: str | os.PathLike) -> Path:
    path = Path(path)
    lines = [PRIMES_MAGIC, f"# k={k} w={2 * k - 2} limit={limit}"]
    lines += [f"{p}\t{coeffs[p]}" for p in sorted(coeffs)]
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def read_prime_cache(path: str | os.PathLike, k: int) -> tuple[int, dict[int, int]]:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").split("\n")
    except OSError as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from exc
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or lines[0] != PRIMES_MAGIC:
        raise CacheError(f"{path}: not a skmaass v1 prime cache")
    head = _parse_header(lines[1], ("k", "w", "limit"))
    if head["k"] != k or head["w"] != 2 * k - 2:
        raise CacheError(f"{path}: cache is for k={head['k']}, wanted k={k}")
    pairs = _parse_pairs(lines[2:], path)
    if [p for p, _ in pairs] != list(sieve_primes(head["limit"])):
        raise CacheError(f"{path}: entries are not exactly the primes up to {head['limit']}")
    return head["limit"], dict(pairs)


def cache_paths(cache_dir: str | os.PathLike, k: int) -> tuple[Path, Path]:
    base = Path(cache_dir)
    return base / f"skmaass-k{k}.cache", base / f"skmaass-k{k}.primes"


def load_or_build(
    k: int,
    N: int,
    prime_limit: int | None = None,
    cache_dir: str | os.PathLike | None = None,
    jobs: int = 1,
) -> CoefficientTable:
    """Table for weight k through N (plus primes to ``prime_limit``), reusing a cache."""
    check_weight(k)
    prime_limit = max(prime_limit or N, N)
    table_path = primes_path = None
    if cache_dir is not None:
        table_path, primes_path = cache_paths(cache_dir, k)

    table = None
    if table_path is not None and table_path.exists():
        head = table_path.open(encoding="utf-8").read(256).split("\n")
        if len(head) > 1 and head[0] == CACHE_MAGIC and _parse_header(head[1], ("k", "w", "N"))["N"] >= N:
            table = read_cache(table_path, k, N)
    if table is None:
        log.info("building coefficient table k=%d N=%d", k, N)
        table = build_eigenform(k, N, jobs)
        if table_path is not None:
            write_cache(table, table_path)

    if prime_limit > N:
        extra = None
        if primes_path is not None and primes_path.exists():
            limit, coeffs = read_prime_cache(primes_path, k)
            if limit >= prime_limit:
                extra = {p: a for p, a in coeffs.items() if N < p <= prime_limit}
        if extra is None:
            coeffs = prime_coefficients(k, prime_limit, jobs)
            if primes_path is not None:
                write_prime_cache(k, prime_limit, coeffs, primes_path)
            extra = {p: a for p, a in coeffs.items() if p > N}
        table = CoefficientTable(k, table.values, extra, prime_limit)
    return table
