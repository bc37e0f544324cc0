"""Prime classes A, B, T, their densities, and the Rankin-type sums over b(p)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath

from .errors import ConfigError, RangeError, VerificationError
from .hpreal import DEFAULT_BITS, HighPrecisionReal
from .lift import DEFAULT_M, SkContext, certified_inf_ratio, exceeds_one_minus
from .numeric import sieve_primes


def _exact(x) -> Fraction:
    # floats go through their shortest repr so 0.5 -> 1/2, 0.2 -> 1/5
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class ClassifierConfig:
    beta: Fraction = Fraction(1, 2)
    beta1: Fraction = Fraction(1, 2)
    beta_tilde: Fraction = Fraction(1, 2)
    c10: Fraction = Fraction(7, 2)
    min_prime_t: int = 17
    M: int = DEFAULT_M

    def __post_init__(self):
        for name in ("beta", "beta1", "beta_tilde", "c10"):
            object.__setattr__(self, name, _exact(getattr(self, name)))
        for name in ("beta", "beta1", "beta_tilde"):
            if not 0 < getattr(self, name) < 2:
                raise ConfigError(f"{name} must lie in (0, 2), got {float(getattr(self, name))}")
        if self.c10 <= 0:
            raise ConfigError("c10 must be positive")
        if self.M < 1:
            raise ConfigError("truncation M must be >= 1")


@dataclass(frozen=True)
class PrimeClassRecord:
    p: int
    b: HighPrecisionReal
    in_a: bool
    in_b: bool
    in_t: bool | None  # None: certified interval straddles the threshold
    t_lower: Fraction | None = None


def b_exceeds(ctx: SkContext, p: int, level: Fraction) -> bool:
    """Exact test of b(p) > level for level > 0."""
    a = ctx.table.ap(p)
    return a > 0 and a * a * level.denominator**2 > level.numerator**2 * p ** (2 * ctx.k - 3)


def b_below(ctx: SkContext, p: int, level: Fraction) -> bool:
    """Exact test of b(p) < -level for level > 0."""
    a = ctx.table.ap(p)
    return a < 0 and a * a * level.denominator**2 > level.numerator**2 * p ** (2 * ctx.k - 3)


def in_t(ctx: SkContext, p: int, cfg: ClassifierConfig) -> tuple[bool | None, Fraction | None]:
    if p < cfg.min_prime_t:
        return False, None
    bounds = certified_inf_ratio(ctx, p, cfg.M)
    if exceeds_one_minus(bounds.lower, cfg.c10, p):
        return True, bounds.lower
    if not exceeds_one_minus(bounds.upper, cfg.c10, p):
        return False, bounds.lower
    return None, bounds.lower


def classify(ctx: SkContext, p: int, cfg: ClassifierConfig, with_t: bool = True) -> PrimeClassRecord:
    if p > ctx.prime_limit:
        raise RangeError(f"prime {p} exceeds coefficient range {ctx.prime_limit}")
    t, lower = in_t(ctx, p, cfg) if with_t else (None, None)
    return PrimeClassRecord(p, ctx.b(p), b_exceeds(ctx, p, cfg.beta), b_below(ctx, p, cfg.beta1), t, lower)


def _primes_upto(ctx: SkContext, x: int) -> tuple[int, ...]:
    if x > ctx.prime_limit:
        raise RangeError(f"x={x} exceeds coefficient range {ctx.prime_limit}")
    return sieve_primes(x).primes


# -- densities --------------------------------------------------------------


@dataclass(frozen=True)
class DensityRow:
    x: int
    prime_count: int
    count_a: int
    count_b: int
    frac_a: HighPrecisionReal
    frac_b: HighPrecisionReal


def density_profile(ctx: SkContext, cfg: ClassifierConfig, x_grid: Sequence[int]) -> list[DensityRow]:
    grid = sorted(x_grid)
    if not grid:
        return []
    primes = _primes_upto(ctx, grid[-1])
    rows = []
    i = count_a = count_b = 0
    for x in grid:
        while i < len(primes) and primes[i] <= x:
            count_a += b_exceeds(ctx, primes[i], cfg.beta)
            count_b += b_below(ctx, primes[i], cfg.beta1)
            i += 1
        frac_a = ctx.hp(Fraction(count_a, i) if i else 0)
        frac_b = ctx.hp(Fraction(count_b, i) if i else 0)
        rows.append(DensityRow(x, i, count_a, count_b, frac_a, frac_b))
    return rows


def sato_tate_reference(beta, bits: int = DEFAULT_BITS) -> HighPrecisionReal:
    """Semicircle measure of {theta : 2 cos theta > beta}.

    Advisory only: compares empirical A-densities with the Sato-Tate law.
    """
    beta = _exact(beta)
    if not -2 < beta < 2:
        raise ConfigError("beta must lie in (-2, 2)")
    with mpmath.workprec(bits + 32):
        theta = mpmath.acos(mpmath.mpf(beta.numerator) / (2 * beta.denominator))
        value = (theta - mpmath.sin(theta) * mpmath.cos(theta)) / mpmath.pi
        mant = int(mpmath.floor(value * mpmath.mpf(2) ** bits))
    return HighPrecisionReal(mant, 4, bits)


# -- Rankin-type sums -------------------------------------------------------


@dataclass(frozen=True)
class RankinSums:
    x: int
    S: HighPrecisionReal
    S_plus: HighPrecisionReal
    count_plus: int  # #{p <= x : b(p) < -beta_tilde}


def _rankin_term(ctx: SkContext, p: int, bt: HighPrecisionReal) -> HighPrecisionReal:
    b = ctx.b(p)
    return (b + bt) * (b - 2)


def rankin_running(ctx: SkContext, x: int, beta_tilde) -> Iterator[RankinSums]:
    """Cumulative S and S+ after each prime p <= x."""
    level = _exact(beta_tilde)
    if not 0 < level < 2:
        raise ConfigError("beta_tilde must lie in (0, 2)")
    bt = ctx.hp(level)
    S = S_plus = ctx.hp(0)
    count = 0
    for p in _primes_upto(ctx, x):
        term = _rankin_term(ctx, p, bt)
        S = S + term
        if b_below(ctx, p, level):
            # both factors negative, each of size <= 4
            if not (term.lower > 0 and term.upper <= 16):
                raise VerificationError(f"S+ term for p={p} outside (0, 16]: {term}")
            S_plus = S_plus + term
            count += 1
        yield RankinSums(p, S, S_plus, count)


def rankin_sums(ctx: SkContext, x: int, beta_tilde) -> RankinSums:
    last = RankinSums(x, ctx.hp(0), ctx.hp(0), 0)
    for last in rankin_running(ctx, x, beta_tilde):
        pass
    if (last.S - last.S_plus).lower > 0:
        raise VerificationError(f"S(x) > S+(x) at x={x}")
    return RankinSums(x, last.S, last.S_plus, last.count_plus)


@dataclass(frozen=True)
class MomentSums:
    x: int
    first: HighPrecisionReal  # sum b(p) log p
    second: HighPrecisionReal  # sum b(p)^2 log p
    theta: HighPrecisionReal  # sum log p


def moment_sums(ctx: SkContext, x: int) -> MomentSums:
    zero = ctx.hp(0)
    first = second = theta = zero
    for p in _primes_upto(ctx, x):
        b = ctx.b(p)
        logp = HighPrecisionReal.log_of(p, ctx.bits)
        first = first + b * logp
        second = second + b * b * logp
        theta = theta + logp
    if abs(first).lower > (theta * 2).upper:
        raise VerificationError(f"first moment exceeds the Deligne ceiling at x={x}")
    return MomentSums(x, first, second, theta)
