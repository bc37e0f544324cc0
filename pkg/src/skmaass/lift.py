"""Saito-Kurokawa eigenvalues lambda_F(n) and their normalised ratios.

lambda_F(p^m) is evaluated with denominators cleared, so every eigenvalue is
an exact integer; the ratio r(n) = lambda_F(n) / n^{k-1} is either kept as a
Fraction or viewed as a HighPrecisionReal.  Bounds that involve sqrt(p) are
certified with rational enclosures of sqrt(p) from integer square roots.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable

from .eigenform import CoefficientTable, PrimePowerCoeffs, coeff_prime_power, load_or_build, normalized_b
from .errors import RangeError, VerificationError
from .hpreal import DEFAULT_BITS, HighPrecisionReal
from .numeric import factorize

DEFAULT_M = 64
_SQRT_BITS = 96


class SkContext:
    """Siegel weight k, its coefficient table, and memoised per-prime data.

    The caches only memoise pure functions of the table, so a context behaves
    as an immutable value.
    """

    def __init__(self, table: CoefficientTable, bits: int = DEFAULT_BITS):
        self.table = table
        self.k = table.k
        self.bits = bits
        self._powers: dict[int, PrimePowerCoeffs] = {}
        self._logs: dict[tuple[int, int], HighPrecisionReal] = {}
        self._b: dict[int, HighPrecisionReal] = {}

    @classmethod
    def build(
        cls,
        k: int,
        N: int = 10_000,
        prime_limit: int | None = None,
        cache_dir: str | os.PathLike | None = None,
        jobs: int = 1,
        bits: int = DEFAULT_BITS,
    ) -> SkContext:
        return cls(load_or_build(k, N, prime_limit, cache_dir, jobs), bits)

    @property
    def prime_limit(self) -> int:
        return self.table.prime_limit

    def __repr__(self) -> str:
        return f"SkContext(k={self.k}, N={self.table.N}, prime_limit={self.prime_limit}, bits={self.bits})"

    def prime_powers(self, p: int, M: int) -> PrimePowerCoeffs:
        have = self._powers.get(p)
        if have is None or have.M < M:
            have = coeff_prime_power(self.table, p, max(M, 2 * have.M if have else M))
            self._powers[p] = have
        return have

    def b(self, p: int) -> HighPrecisionReal:
        """Memoised normalised coefficient b(p) = a(p) / p^{k-3/2}."""
        hit = self._b.get(p)
        if hit is None:
            hit = self._b[p] = normalized_b(self.table, p, self.bits)
        return hit

    def hp(self, q: Fraction | int) -> HighPrecisionReal:
        return HighPrecisionReal.coerce(q if isinstance(q, int) else Fraction(q), self.bits)


# -- exact eigenvalues ------------------------------------------------------


def lambda_prime_power(ctx: SkContext, p: int, m: int) -> int:
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 1
    a = ctx.prime_powers(p, m).values
    e = ctx.k - 1
    total = p ** (m * e) + p ** (m * e - 1) + a[m]
    for ell in range(1, m):
        top = (m - ell) * e
        total += (p**top + p ** (top - 1)) * a[ell]
    return total


def lam(ctx: SkContext, n: int) -> int:
    """lambda_F(n) by multiplicativity."""
    out = 1
    for p, e in factorize(n):
        out *= lambda_prime_power(ctx, p, e)
    return out


@dataclass(frozen=True)
class RatioValue:
    n: int
    lam: int
    r: HighPrecisionReal
    k: int

    @property
    def exact(self) -> Fraction:
        return Fraction(self.lam, self.n ** (self.k - 1))


def ratio(ctx: SkContext, n: int) -> RatioValue:
    value = lam(ctx, n)
    if value <= 0:
        raise VerificationError(f"positivity fails: lambda_F({n}) = {value}")
    return RatioValue(n, value, ctx.hp(Fraction(value, n ** (ctx.k - 1))), ctx.k)


def ratio_prime_powers(ctx: SkContext, p: int, M: int) -> list[Fraction]:
    """Exact r(p^m) for m = 0..M, built incrementally."""
    e = ctx.k - 1
    a = ctx.prime_powers(p, M).values
    base = 1 + Fraction(1, p)
    out = [Fraction(1)]
    partial = Fraction(0)
    for m in range(1, M + 1):
        term = Fraction(a[m], p ** (m * e))
        out.append(base + base * partial + term)
        partial += term
    return out


def log_ratio_prime_power(ctx: SkContext, p: int, m: int) -> HighPrecisionReal:
    key = (p, m)
    hit = ctx._logs.get(key)
    if hit is None:
        value = lambda_prime_power(ctx, p, m)
        if value <= 0:
            raise VerificationError(f"positivity fails: lambda_F({p}^{m}) = {value}")
        hit = HighPrecisionReal.log_of(Fraction(value, p ** (m * (ctx.k - 1))), ctx.bits)
        ctx._logs[key] = hit
    return hit


def ratio_log(ctx: SkContext, factors: Iterable[int | tuple[int, int]]) -> HighPrecisionReal:
    """sum of log r(p^m) over distinct primes; a bare int means exponent 1."""
    pairs = sorted((f, 1) if isinstance(f, int) else (int(f[0]), int(f[1])) for f in factors)
    primes = [p for p, _ in pairs]
    if len(set(primes)) != len(primes):
        raise ValueError("ratio_log needs distinct primes")
    total = HighPrecisionReal(0, 0, ctx.bits)
    for p, m in pairs:
        if m:
            total = total + log_ratio_prime_power(ctx, p, m)
    return total


# -- closed forms and tails -------------------------------------------------


def sqrt_bounds(p: int, bits: int = _SQRT_BITS) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(p) <= hi."""
    s = isqrt(p << (2 * bits))
    lo = Fraction(s, 1 << bits)
    return lo, lo if s * s == p << (2 * bits) else Fraction(s + 1, 1 << bits)


def alpha_closed_form(s):
    """(3s - 2) / (s (s - 1)^2); with s = sqrt(p) this is alpha_p."""
    return (3 * s - 2) / (s * (s - 1) ** 2)


def alpha(p: int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
    """sum_{n>=2} (n+1) p^{-n/2} in closed form."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return alpha_closed_form(HighPrecisionReal.sqrt_of(p, bits))


def alpha_bounds(p: int) -> tuple[Fraction, Fraction]:
    # alpha is decreasing in sqrt(p)
    lo, hi = sqrt_bounds(p)
    return alpha_closed_form(hi), alpha_closed_form(lo)


def alpha_series(p: int, terms: int = 200, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
    x = 1 / HighPrecisionReal.sqrt_of(p, bits)
    power = x * x
    total = HighPrecisionReal(0, 0, bits)
    for n in range(2, terms + 2):
        total = total + power * (n + 1)
        power = power * x
    return total


def tail_closed_form(x, M: int):
    """sum_{l>M} (l+1) x^l for |x| < 1, in closed form."""
    return x ** (M + 1) * ((M + 2) - (M + 1) * x) / (1 - x) ** 2


def tail_bound(p: int, M: int, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
    """sum_{l>M} (l+1) p^{-l/2}: majorant of |sum_{l>M} a(p^l)/p^{l(k-1)}|."""
    if p < 2 or M < 0:
        raise ValueError("need p >= 2 and M >= 0")
    return tail_closed_form(1 / HighPrecisionReal.sqrt_of(p, bits), M)


def tail_bound_upper(p: int, M: int) -> Fraction:
    """Rational upper bound on tail_bound(p, M); the tail is increasing in p^{-1/2}."""
    lo, _ = sqrt_bounds(p)
    return tail_closed_form(1 / lo, M)


def limit_gap_bound(p: int, m: int) -> Fraction:
    """Rational bound on |r(p^m) - L_p|."""
    if m < 1:
        raise ValueError("m must be >= 1")
    lo, _ = sqrt_bounds(p)
    return (1 + Fraction(1, p)) * tail_bound_upper(p, m - 1) + (m + 1) / lo**m


def limit_deviation_bound(p: int) -> Fraction:
    """Rational upper bound on |L_p - 1|, i.e. on 2 sqrt(p) / (sqrt(p) - 1)^2."""
    lo, _ = sqrt_bounds(p)
    return 2 * lo / (lo - 1) ** 2


# -- limit points -----------------------------------------------------------


@dataclass(frozen=True)
class LimitPoint:
    p: int
    exact: Fraction
    value: HighPrecisionReal
    M: int
    partial: Fraction  # 1 + 1/p + (1 + 1/p) sum_{l<=M} a(p^l)/p^{l(k-1)}
    tail: Fraction  # rigorous bound on |exact - partial|

    def sign(self) -> int:
        return (self.exact > 1) - (self.exact < 1)


def limit_exact(ctx: SkContext, p: int) -> Fraction:
    """lim_m r(p^m) = (1 + 1/p) / (1 - a(p)/p^{k-1} + 1/p)."""
    top = p ** (ctx.k - 1) + p ** (ctx.k - 2)
    return Fraction(top, top - ctx.table.ap(p))


def limit_point(ctx: SkContext, p: int, M: int = DEFAULT_M) -> LimitPoint:
    exact = limit_exact(ctx, p)
    e = ctx.k - 1
    a = ctx.prime_powers(p, M).values
    base = 1 + Fraction(1, p)
    partial = base * (1 + sum(Fraction(a[ell], p ** (ell * e)) for ell in range(1, M + 1)))
    tail = base * tail_bound_upper(p, M)
    if abs(exact - partial) > tail:
        raise VerificationError(f"closed-form limit for p={p} disagrees with its series beyond the tail bound")
    return LimitPoint(p, exact, ctx.hp(exact), M, partial, tail)


# -- certified infima / suprema ---------------------------------------------


@dataclass(frozen=True)
class RatioBounds:
    """Certified enclosure [lower, upper] of inf_m (or sup_m) r(p^m), m >= 1."""

    p: int
    M: int
    lower: Fraction
    upper: Fraction
    attained_at: int  # m realising the computed extremum

    @property
    def vacuous(self) -> bool:
        return self.lower <= 0

    def as_hp(self, bits: int = DEFAULT_BITS) -> tuple[HighPrecisionReal, HighPrecisionReal]:
        return (HighPrecisionReal.from_fraction(self.lower, bits), HighPrecisionReal.from_fraction(self.upper, bits))


def _series_envelope(ctx: SkContext, p: int, M: int) -> tuple[list[Fraction], Fraction, Fraction]:
    rs = ratio_prime_powers(ctx, p, M)
    e = ctx.k - 1
    a = ctx.prime_powers(p, M).values
    base = 1 + Fraction(1, p)
    partial = base * (1 + sum(Fraction(a[ell], p ** (ell * e)) for ell in range(1, M + 1)))
    return rs[1:], partial, base * tail_bound_upper(p, M)


def certified_inf_ratio(ctx: SkContext, p: int, M: int = DEFAULT_M) -> RatioBounds:
    """Enclose inf_{m>=1} r(p^m).

    For m > M every r(p^m) is at least the M-term partial sum minus the
    Deligne-majorised tail, so the smaller of that and the computed minimum is
    a rigorous lower bound; the computed minimum is an upper bound.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    rs, partial, tail = _series_envelope(ctx, p, M)
    best = min(range(len(rs)), key=rs.__getitem__)
    return RatioBounds(p, M, min(rs[best], partial - tail), rs[best], best + 1)


def certified_sup_ratio(ctx: SkContext, p: int, M: int = DEFAULT_M) -> RatioBounds:
    if M < 1:
        raise ValueError("M must be >= 1")
    rs, partial, tail = _series_envelope(ctx, p, M)
    best = max(range(len(rs)), key=rs.__getitem__)
    return RatioBounds(p, M, rs[best], max(rs[best], partial + tail), best + 1)


def exceeds_one_minus(value: Fraction, c: Fraction, p: int) -> bool:
    """Exact test of value >= 1 - c/sqrt(p) for c > 0."""
    gap = 1 - value
    return gap <= 0 or gap * gap * p <= c * c


def check_range(ctx: SkContext, p: int) -> None:
    if p > ctx.prime_limit:
        raise RangeError(f"prime {p} exceeds coefficient range {ctx.prime_limit}")
