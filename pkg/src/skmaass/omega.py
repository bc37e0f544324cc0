"""Omega-type constructions and empirical bound constants for r(n) = lambda_F(n)/n^{k-1}."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classify import ClassifierConfig, b_below, b_exceeds
from .errors import RangeError, VerificationError
from .hpreal import HighPrecisionReal
from .lift import (
    LimitPoint,
    SkContext,
    certified_inf_ratio,
    certified_sup_ratio,
    limit_deviation_bound,
    limit_point,
    log_ratio_prime_power,
    ratio,
    ratio_log,
)
from .numeric import chunked, factorize, pmap, sieve_primes, smallest_prime_factors

A_SIDE, B_SIDE = "A", "B"


def _require(ctx: SkContext, x: int) -> None:
    if x > ctx.prime_limit:
        raise RangeError(f"construction needs primes up to {x}, coefficient range is {ctx.prime_limit}")


def build_nx_A(ctx: SkContext, cfg: ClassifierConfig, x: int) -> list[int]:
    """Primes 5 <= p <= x with b(p) > beta."""
    _require(ctx, max(x, 0))
    return [p for p in sieve_primes(max(x, 0)) if p >= 5 and b_exceeds(ctx, p, cfg.beta)]


def nx_B_threshold(cfg: ClassifierConfig) -> Fraction:
    return 4 / cfg.beta1**2


def build_nx_B(ctx: SkContext, cfg: ClassifierConfig, x: int) -> list[int]:
    """Primes x < p <= 2x with b(p) < -beta1; needs x >= 4/beta1^2."""
    threshold = nx_B_threshold(cfg)
    if x < threshold:
        raise RangeError(f"x={x} is below the B-side threshold 4/beta1^2 = {float(threshold):g}")
    _require(ctx, 2 * x)
    return [p for p in sieve_primes(2 * x) if p > x and b_below(ctx, p, cfg.beta1)]


@dataclass(frozen=True)
class OmegaReportRow:
    x: int
    prime_count: int
    log_n: HighPrecisionReal
    log_ratio: HighPrecisionReal
    statistic: HighPrecisionReal


def growth_statistic(log_ratio: HighPrecisionReal, log_n: HighPrecisionReal) -> HighPrecisionReal:
    """log r * log(log n) / sqrt(log n); zero for the empty product."""
    if log_n.mant == 0 and log_n.err == 0:
        return HighPrecisionReal(0, 0, log_n.bits)
    return log_ratio * log_n.log() / log_n.sqrt()


def omega_row(ctx: SkContext, x: int, primes: Sequence[int], side: str) -> OmegaReportRow:
    log_n = HighPrecisionReal(0, 0, ctx.bits)
    for p in primes:
        log_n = log_n + HighPrecisionReal.log_of(p, ctx.bits)
    log_r = ratio_log(ctx, primes)
    if primes:
        # each A-side factor exceeds 1 and each B-side factor is below 1
        if side == A_SIDE and log_r.sign() != 1:
            raise VerificationError(f"A-side log ratio not positive at x={x}")
        if side == B_SIDE and log_r.sign() != -1:
            raise VerificationError(f"B-side log ratio not negative at x={x}")
    return OmegaReportRow(x, len(primes), log_n, log_r, growth_statistic(log_r, log_n))


def omega_report(ctx: SkContext, cfg: ClassifierConfig, x_grid: Sequence[int], side: str) -> list[OmegaReportRow]:
    if side not in (A_SIDE, B_SIDE):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    build = build_nx_A if side == A_SIDE else build_nx_B
    return [omega_row(ctx, x, build(ctx, cfg, x), side) for x in sorted(x_grid)]


# -- bound scans ------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    n: int
    log_ratio: HighPrecisionReal
    statistic: HighPrecisionReal


@dataclass(frozen=True)
class BoundScanReport:
    N: int
    kind: str  # "upper" (c1) or "lower" (c3)
    constant: HighPrecisionReal
    argmax: int
    extremal: tuple[ScanRow, ...]
    min_ratio: HighPrecisionReal | None = None
    argmin: int | None = None


_SCAN: dict[str, object] = {}
_KEEP = 5


def _scan_block(ns: list[int]) -> tuple[list[ScanRow], list[ScanRow], tuple[int, int]]:
    ctx: SkContext = _SCAN["ctx"]  # type: ignore[assignment]
    spf = _SCAN["spf"]
    logs: dict[int, HighPrecisionReal] = {}
    ups: list[ScanRow] = []
    lows: list[ScanRow] = []
    low_key = None
    for n in ns:
        lr = HighPrecisionReal(0, 0, ctx.bits)
        ln = HighPrecisionReal(0, 0, ctx.bits)
        for p, m in factorize(n, spf):
            lr = lr + log_ratio_prime_power(ctx, p, m)
            lp = logs.get(p)
            if lp is None:
                lp = logs[p] = HighPrecisionReal.log_of(p, ctx.bits)
            ln = ln + lp * m
        weight = (ln.log() / ln).sqrt()
        if lr.mant > 0:
            ups.append(ScanRow(n, lr, lr * weight))
        if lr.mant < 0:
            lows.append(ScanRow(n, lr, -lr * weight))
        key = (lr.mant, n)
        if low_key is None or key < low_key:
            low_key = key
        if len(ups) > 4 * _KEEP:
            ups = _top(ups)
        if len(lows) > 4 * _KEEP:
            lows = _top(lows)
    return _top(ups), _top(lows), low_key


def _top(rows: list[ScanRow]) -> list[ScanRow]:
    # ties go to the smaller n so the result does not depend on scan order
    return sorted(rows, key=lambda r: (-r.statistic.mant, r.n))[:_KEEP]


def _run_scan(ctx: SkContext, N: int, jobs: int, descending: bool):
    if N < 3:
        raise RangeError("bound scans need N >= 3")
    if N > ctx.prime_limit:
        raise RangeError(f"scan to N={N} needs a(p) up to {N}, coefficient range is {ctx.prime_limit}")
    ns = list(range(3, N + 1))
    if descending:
        ns.reverse()
    _SCAN["ctx"], _SCAN["spf"] = ctx, smallest_prime_factors(N)
    try:
        blocks = pmap(_scan_block, chunked(ns, 4 * jobs) if jobs > 1 else [ns], jobs)
    finally:
        _SCAN.clear()
    ups = _top([r for b in blocks for r in b[0]])
    lows = _top([r for b in blocks for r in b[1]])
    low_key = min(b[2] for b in blocks)
    return ups, lows, low_key[1]


def _report(ctx: SkContext, N: int, kind: str, rows: list[ScanRow], argmin: int | None = None) -> BoundScanReport:
    zero = HighPrecisionReal(0, 0, ctx.bits)
    best = rows[0] if rows else ScanRow(3, zero, zero)
    min_ratio = ratio(ctx, argmin).r if argmin is not None else None
    return BoundScanReport(N, kind, best.statistic, best.n, tuple(rows), min_ratio, argmin)


def upper_bound_scan(ctx: SkContext, N: int, jobs: int = 1, descending: bool = False) -> BoundScanReport:
    """max over 3 <= n <= N of log r(n) * sqrt(log log n / log n)."""
    ups, _, _ = _run_scan(ctx, N, jobs, descending)
    return _report(ctx, N, "upper", ups)


def lower_bound_scan(ctx: SkContext, N: int, jobs: int = 1, descending: bool = False) -> BoundScanReport:
    """max over 3 <= n <= N of -log r(n) * sqrt(log log n / log n), plus min r(n)."""
    _, lows, argmin = _run_scan(ctx, N, jobs, descending)
    return _report(ctx, N, "lower", lows, argmin)


def bound_scans(ctx: SkContext, N: int, jobs: int = 1) -> tuple[BoundScanReport, BoundScanReport]:
    ups, lows, argmin = _run_scan(ctx, N, jobs, False)
    return _report(ctx, N, "upper", ups), _report(ctx, N, "lower", lows, argmin)


# -- limit points -----------------------------------------------------------


@dataclass(frozen=True)
class LimitEnumeration:
    above: tuple[LimitPoint, ...]
    below: tuple[LimitPoint, ...]


def _check_distinct(points: Sequence[LimitPoint]) -> None:
    ordered = sorted(points, key=lambda lp: lp.exact)
    for left, right in zip(ordered, ordered[1:]):
        if left.value.upper < right.value.lower:
            continue
        # intervals overlap: the exact rationals decide
        if left.exact == right.exact:
            raise VerificationError(f"limit points for p={left.p} and p={right.p} coincide")


def limit_point_enumeration(ctx: SkContext, count: int, M: int = 64) -> LimitEnumeration:
    """First ``count`` primes with L_p > 1 and first ``count`` with L_p < 1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    above: list[LimitPoint] = []
    below: list[LimitPoint] = []
    for p in sieve_primes(ctx.prime_limit):
        if len(above) >= count and len(below) >= count:
            break
        lp = limit_point(ctx, p, M)
        a = ctx.table.ap(p)
        if lp.sign() != (a > 0) - (a < 0):
            raise VerificationError(f"sign(L_p - 1) != sign(a(p)) at p={p}")
        if abs(lp.exact - 1) > limit_deviation_bound(p):
            raise VerificationError(f"|L_p - 1| exceeds its Deligne bound at p={p}")
        target = above if lp.sign() > 0 else below if lp.sign() < 0 else None
        if target is None:
            continue  # a(p) = 0: L_p = 1 exactly, neither side
        if len(target) < count:
            target.append(lp)
    if len(above) < count or len(below) < count:
        raise RangeError(
            f"only {len(above)} limit points above 1 and {len(below)} below 1 with primes up to {ctx.prime_limit}"
        )
    _check_distinct(above)
    _check_distinct(below)
    return LimitEnumeration(tuple(above), tuple(below))


# -- two-sided constants for A-primes ---------------------------------------


@dataclass(frozen=True)
class WindowConstants:
    window: tuple[int, int]
    primes: tuple[int, ...]
    e1: HighPrecisionReal | None  # min (inf_m r(p^m) - 1) sqrt(p), certified lower side
    e1_prime: int | None
    e2: HighPrecisionReal  # max (sup_m r(p^m) - 1) sqrt(p), certified upper side
    e2_prime: int
    exceptions: tuple[int, ...]  # primes whose infimum is not certified above 1


def window_constants(ctx: SkContext, cfg: ClassifierConfig, window: tuple[int, int]) -> WindowConstants:
    lo, hi = window
    _require(ctx, hi)
    primes = [p for p in sieve_primes(hi) if p >= lo and b_exceeds(ctx, p, cfg.beta)]
    if not primes:
        raise RangeError(f"no primes of A in window [{lo}, {hi}]")
    e1 = e2 = None
    e1_p = e2_p = None
    exceptions = []
    for p in primes:
        root = HighPrecisionReal.sqrt_of(p, ctx.bits)
        inf = certified_inf_ratio(ctx, p, cfg.M)
        sup = certified_sup_ratio(ctx, p, cfg.M)
        if inf.lower > 1:
            low = (ctx.hp(inf.lower) - 1) * root
            if e1 is None or low.mant < e1.mant:
                e1, e1_p = low, p
        else:
            exceptions.append(p)
        high = (ctx.hp(sup.upper) - 1) * root
        if e2 is None or high.mant > e2.mant:
            e2, e2_p = high, p
    return WindowConstants((lo, hi), tuple(primes), e1, e1_p, e2, e2_p, tuple(exceptions))
