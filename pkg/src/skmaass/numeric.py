"""Sieves, divisor sums and truncated q-series over exact integers.

All series here carry Python ints in numpy object arrays: slicing and
vectorised ``+=`` run the loops in C while the arithmetic stays exact.
"""
from __future__ import annotations

import bisect
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

SUPPORTED_SIGMA_POWERS = (0, 3, 5, 9, 13)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def upto(self, x: int) -> tuple[int, ...]:
        return self.primes[: bisect.bisect_right(self.primes, x)]

    def count(self, x: int) -> int:
        return bisect.bisect_right(self.primes, x)


def sieve_primes(limit: int) -> PrimeTable:
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if limit < 2:
        return PrimeTable(limit, ())
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return PrimeTable(limit, tuple(int(p) for p in np.flatnonzero(mask)))


def smallest_prime_factors(limit: int) -> np.ndarray:
    """spf[n] for 0 <= n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    return spf


def factorize(n: int, spf: np.ndarray | None = None) -> list[tuple[int, int]]:
    """Prime factorisation of ``n`` as ascending ``(p, e)`` pairs."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[tuple[int, int]] = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def nu(n: int) -> int:
    """Number of distinct prime divisors of n."""
    return len(factorize(n))


def sigma_table(r: int, N: int) -> tuple[int, ...]:
    """Divisor sums sigma_r(n) for 0 <= n <= N by a divisor sieve.

    Index 0 holds 0 so that entry ``n`` is sigma_r(n).
    """
    if r not in SUPPORTED_SIGMA_POWERS:
        raise ValueError(f"unsupported divisor power r={r}; expected one of {SUPPORTED_SIGMA_POWERS}")
    if N < 1:
        raise ValueError("N must be >= 1")
    table = np.zeros(N + 1, dtype=object)
    table[:] = 0
    for d in range(1, N + 1):
        table[d::d] += d**r
    return tuple(int(v) for v in table)


# -- series -----------------------------------------------------------------


def _object_array(values: Iterable[int]) -> np.ndarray:
    vals = [int(v) for v in values]
    arr = np.empty(len(vals), dtype=object)
    arr[:] = vals
    return arr


@dataclass(frozen=True, eq=False)
class DenseSeries:
    """sum_{n<=N} c(n) q^n + O(q^{N+1}) with exact integer coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.dtype != object:
            object.__setattr__(self, "coeffs", _object_array(self.coeffs))
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs.flags.writeable = False

    @classmethod
    def from_list(cls, values: Sequence[int]) -> DenseSeries:
        return cls(_object_array(values))

    @classmethod
    def one(cls, N: int) -> DenseSeries:
        return cls.from_list([1] + [0] * N)

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def tolist(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseSeries):
            return NotImplemented
        return self.tolist() == other.tolist()

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"DenseSeries(N={self.N}, [{head}{', ...' if self.N > 5 else ''}])"


@dataclass(frozen=True)
class SparseSeries:
    N: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = -1
        for e, c in self.terms:
            if e <= last or e > self.N:
                raise ValueError("exponents must be strictly ascending and <= N")
            if c == 0:
                raise ValueError("sparse series must not store zero coefficients")
            last = e

    def densify(self) -> DenseSeries:
        vals = [0] * (self.N + 1)
        for e, c in self.terms:
            vals[e] = c
        return DenseSeries.from_list(vals)


def pentagonal_series(N: int) -> SparseSeries:
    """prod_{n>=1} (1 - q^n) truncated at N, via Euler's pentagonal theorem."""
    terms = {0: 1}
    j = 1
    while j * (3 * j - 1) // 2 <= N:
        sign = -1 if j % 2 else 1
        for e in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if e <= N:
                terms[e] = sign
        j += 1
    return SparseSeries(N, tuple(sorted(terms.items())))


def _check_truncation(A: DenseSeries, N: int) -> None:
    if A.N != N:
        raise ValueError(f"truncation mismatch: {A.N} != {N}")


def series_coeff(A: DenseSeries, B: DenseSeries, n: int, start: int = 0) -> int:
    """Coefficient of q^n in A*B in O(n); terms below ``start`` in A are skipped."""
    if n > A.N or n > B.N:
        raise ValueError(f"n={n} exceeds truncation")
    if start > n:
        return 0
    return int(np.dot(A.coeffs[start : n + 1], B.coeffs[n - start :: -1]))


def series_mul(A: DenseSeries, B: DenseSeries) -> DenseSeries:
    _check_truncation(B, A.N)
    a, b = A.coeffs, B.coeffs
    out = [int(a[0] * b[0])]
    out.extend(int(np.dot(a[: n + 1], b[n::-1])) for n in range(1, A.N + 1))
    return DenseSeries.from_list(out)


def series_mul_sparse(A: DenseSeries, S: SparseSeries) -> DenseSeries:
    _check_truncation(A, S.N)
    N = A.N
    a = A.coeffs
    out = np.empty(N + 1, dtype=object)
    out[:] = 0
    for e, c in S.terms:
        if c == 1:
            out[e:] += a[: N + 1 - e]
        elif c == -1:
            out[e:] -= a[: N + 1 - e]
        else:
            out[e:] += c * a[: N + 1 - e]
    return DenseSeries(out)


# -- process fan-out ---------------------------------------------------------


def pmap(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """Order-preserving map, fanned out over ``jobs`` forked processes."""
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    if jobs == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
        return list(pool.map(fn, items))


def chunked(items: Sequence[T], pieces: int) -> list[list[T]]:
    """Deal ``items`` round-robin into ``pieces`` lists (balances growing costs)."""
    pieces = max(1, min(pieces, len(items)))
    return [list(items[i::pieces]) for i in range(pieces)]
