"""skmaass command line: coefficient caches, eigenvalues, verification and reports.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error, 4 range error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .classify import (
    ClassifierConfig,
    classify,
    density_profile,
    moment_sums,
    rankin_running,
    sato_tate_reference,
)
from .eigenform import (
    SUPPORTED_K,
    cache_paths,
    check_weight,
    coeff,
    deligne_check,
    load_or_build,
)
from .errors import ConfigError, SkError, VerificationError
from .hpreal import DEFAULT_BITS, HighPrecisionReal
from .lift import (
    DEFAULT_M,
    SkContext,
    alpha_bounds,
    alpha_closed_form,
    alpha_series,
    lam,
    limit_deviation_bound,
    limit_gap_bound,
    limit_point,
    ratio,
    ratio_prime_powers,
)
from .numeric import factorize, sieve_primes
from .omega import A_SIDE, B_SIDE, bound_scans, limit_point_enumeration, omega_report, window_constants
from .report import DEFAULT_DIGITS, FORMATS, Report

log = logging.getLogger("skmaass")

DEFAULT_N = 10_000
CACHE_ENV = "SKMAASS_CACHE_DIR"


def default_cache_dir() -> str:
    return os.environ.get(CACHE_ENV) or str(Path.home() / ".cache" / "skmaass")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(float(part)) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


@dataclass
class RunConfig:
    k: int = 10
    N: int = DEFAULT_N
    prime_limit: int | None = None
    beta: Fraction = Fraction(1, 2)
    beta1: Fraction = Fraction(1, 2)
    beta_tilde: Fraction = Fraction(1, 2)
    c10: Fraction = Fraction(7, 2)
    M: int = DEFAULT_M
    precision_bits: int = DEFAULT_BITS
    x_grid: tuple[int, ...] | None = None
    format: str = "json"
    cache_dir: str | None = None
    jobs: int = 1
    digits: int = DEFAULT_DIGITS
    out_dir: str | None = None
    classifier: ClassifierConfig = field(init=False, repr=False)

    def __post_init__(self):
        check_weight(self.k)
        if self.N < 2:
            raise ConfigError("N must be >= 2")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.precision_bits < 32:
            raise ConfigError("precision-bits must be >= 32")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.x_grid is not None and min(self.x_grid) < 1:
            raise ConfigError("x-grid values must be positive")
        self.classifier = ClassifierConfig(self.beta, self.beta1, self.beta_tilde, self.c10, M=self.M)

    def snapshot(self, prime_limit: int) -> dict:
        """Every setting that can change a report; jobs and out_dir cannot."""
        return {
            "k": self.k,
            "N": self.N,
            "prime_limit": prime_limit,
            "beta": self.classifier.beta,
            "beta1": self.classifier.beta1,
            "beta_tilde": self.classifier.beta_tilde,
            "c10": self.classifier.c10,
            "M": self.M,
            "precision_bits": self.precision_bits,
            "x_grid": list(self.x_grid) if self.x_grid else None,
            "format": self.format,
            "cache_dir": self.cache_dir,
        }

    def context(self, needed: int = 0) -> SkContext:
        limit = self.prime_limit if self.prime_limit is not None else max(self.N, needed)
        table = load_or_build(self.k, self.N, limit, self.cache_dir, self.jobs)
        return SkContext(table, self.precision_bits)


# -- commands ---------------------------------------------------------------


def _report(cfg: RunConfig, ctx: SkContext, command: str, columns, rows, args=None, summary=None) -> Report:
    return Report(
        command,
        cfg.k,
        cfg.snapshot(ctx.prime_limit),
        columns,
        rows,
        args or {},
        summary or {},
        cfg.digits,
    )


def cmd_coeffs(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    if cfg.cache_dir is None:
        raise ConfigError("coeffs needs a cache directory")
    ctx = cfg.context()
    table = ctx.table
    path, _ = cache_paths(cfg.cache_dir, cfg.k)
    mags = [(abs(table.values[n]), n) for n in range(1, table.N + 1) if table.values[n]]
    small, large = min(mags), max(mags)
    rows = [[str(path), table.N, small[0], small[1], large[0], large[1]]]
    return _report(cfg, ctx, "coeffs", ["cache", "N", "min_abs", "min_abs_n", "max_abs", "max_abs_n"], rows)


def cmd_lambda(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    needed = max((p for n in ns.n for p, _ in factorize(n)), default=0)
    ctx = cfg.context(needed)
    rows = []
    for n in ns.n:
        rv = ratio(ctx, n)
        rows.append([n, rv.lam, rv.r, rv.exact])
    return _report(cfg, ctx, "lambda", ["n", "lambda", "r", "r_exact"], rows, {"n": list(ns.n)})


def _suite_positivity(ctx: SkContext) -> str:
    for n in range(1, ctx.table.N + 1):
        if lam(ctx, n) <= 0:
            raise VerificationError(f"lambda_F({n}) <= 0")
    return f"lambda_F(n) > 0 for n <= {ctx.table.N}"


def _suite_deligne(ctx: SkContext) -> str:
    rep = deligne_check(ctx.table)
    n, margin = rep.tightest[0]
    return f"{rep.checked} coefficients within the Deligne bound; tightest n={n} margin={margin:.3g}"


def _suite_recursion(ctx: SkContext) -> str:
    table = ctx.table
    for n in range(2, table.N + 1):
        if coeff(table, n) != table.values[n]:
            raise VerificationError(f"a({n}) from the table differs from recursion/multiplicativity")
    return f"recursion and multiplicativity reproduce a(n) for n <= {table.N}"


def _suite_alpha(ctx: SkContext) -> str:
    tol = Fraction(1, 10**25)
    for p in sieve_primes(100):
        diff = alpha_closed_form(HighPrecisionReal.sqrt_of(p, ctx.bits)) - alpha_series(p, 200, ctx.bits)
        if abs(diff).upper > tol:
            raise VerificationError(f"alpha_p closed form and 200-term sum differ at p={p}")
    for p in sieve_primes(10_000):
        if p >= 11 and alpha_bounds(p)[1] >= Fraction(6, p):
            raise VerificationError(f"alpha_p >= 6/p at p={p}")
    return "alpha_p closed form matches its series (p <= 100); alpha_p < 6/p for 11 <= p <= 10^4"


def _suite_limits(ctx: SkContext, M: int) -> str:
    primes = sieve_primes(min(ctx.prime_limit, 1000)).primes
    for p in primes:
        lp = limit_point(ctx, p, M)
        a = ctx.table.ap(p)
        if lp.sign() != (a > 0) - (a < 0):
            raise VerificationError(f"sign(L_p - 1) != sign(a(p)) at p={p}")
        if abs(lp.exact - 1) > limit_deviation_bound(p):
            raise VerificationError(f"|L_p - 1| above its bound at p={p}")
        for m, r in enumerate(ratio_prime_powers(ctx, p, 8)[1:], start=1):
            if abs(r - lp.exact) > limit_gap_bound(p, m):
                raise VerificationError(f"r({p}^{m}) too far from L_p")
    return f"limit points consistent for {len(primes)} primes"


SUITES: tuple[tuple[str, Callable[[SkContext, RunConfig], str]], ...] = (
    ("positivity", lambda ctx, cfg: _suite_positivity(ctx)),
    ("deligne", lambda ctx, cfg: _suite_deligne(ctx)),
    ("recursion", lambda ctx, cfg: _suite_recursion(ctx)),
    ("alpha", lambda ctx, cfg: _suite_alpha(ctx)),
    ("limits", lambda ctx, cfg: _suite_limits(ctx, cfg.M)),
)


class SuiteFailure(VerificationError):
    def __init__(self, suite: str, detail: str, report: Report):
        super().__init__(f"verification failed in suite '{suite}': {detail}")
        self.suite = suite
        self.report = report


def cmd_verify(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    ctx = cfg.context()
    rows = []
    report = _report(cfg, ctx, "verify", ["suite", "status", "detail"], rows)
    for name, suite in SUITES:
        try:
            detail = suite(ctx, cfg)
        except VerificationError as exc:
            rows.append([name, "FAIL", str(exc)])
            raise SuiteFailure(name, str(exc), report) from exc
        log.info("suite %s passed", name)
        rows.append([name, "PASS", detail])
    return report


def cmd_classify(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    x = ns.x or 1000
    ctx = cfg.context(x)
    rows = []
    for p in sieve_primes(x):
        rec = classify(ctx, p, cfg.classifier)
        t = "undecided" if rec.in_t is None else rec.in_t
        rows.append([p, rec.b, rec.in_a, rec.in_b, t, ctx.hp(rec.t_lower) if rec.t_lower is not None else None])
    report = _report(cfg, ctx, "classify", ["p", "b", "in_A", "in_B", "in_T", "inf_ratio_lower"], rows, {"x": x})
    if cfg.out_dir:
        from .plotting import plot_points

        groups = {
            "A": [(r[0], float(r[1])) for r in rows if r[2]],
            "B": [(r[0], float(r[1])) for r in rows if r[3]],
            "other": [(r[0], float(r[1])) for r in rows if not (r[2] or r[3])],
        }
        plot_points(
            Path(cfg.out_dir) / "classify.png",
            {k: tuple(zip(*v)) for k, v in groups.items() if v},
            f"normalised coefficients, k={cfg.k}",
            "p",
            "b(p)",
            logx=True,
        )
    return report


def _grid(cfg: RunConfig, default: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(cfg.x_grid or default))


def cmd_omega(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    grid = _grid(cfg, (1000, 10_000))
    needed = grid[-1] if ns.side == A_SIDE else 2 * grid[-1]
    ctx = cfg.context(needed)
    rows = [[r.x, r.prime_count, r.log_n, r.log_ratio, r.statistic] for r in omega_report(ctx, cfg.classifier, grid, ns.side)]
    report = _report(
        cfg, ctx, "omega", ["x", "prime_count", "log_n", "log_ratio", "statistic"], rows, {"side": ns.side}
    )
    if cfg.out_dir:
        from .plotting import plot_series

        plot_series(
            Path(cfg.out_dir) / f"omega-{ns.side}.png",
            [r[0] for r in rows],
            {"statistic": [float(r[4]) for r in rows]},
            f"growth statistic, side {ns.side}, k={cfg.k}",
            "x",
            "log r(n) log log n / sqrt(log n)",
            logx=True,
            hline=0.0,
        )
    return report


def cmd_limits(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    ctx = cfg.context()
    enum = limit_point_enumeration(ctx, ns.count, cfg.M)
    rows = []
    for side, points in (("above", enum.above), ("below", enum.below)):
        for lp in points:
            rows.append([side, lp.p, lp.value, lp.exact, ctx.table.ap(lp.p)])
    report = _report(cfg, ctx, "limits", ["side", "p", "L", "L_exact", "a_p"], rows, {"count": ns.count})
    if cfg.out_dir:
        from .plotting import plot_points

        plot_points(
            Path(cfg.out_dir) / "limits.png",
            {
                "L_p > 1": ([lp.p for lp in enum.above], [float(lp.value) for lp in enum.above]),
                "L_p < 1": ([lp.p for lp in enum.below], [float(lp.value) for lp in enum.below]),
            },
            f"limit points of r(p^m), k={cfg.k}",
            "p",
            "L_p",
            logx=True,
            hline=1.0,
        )
    return report


def cmd_sums(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    grid = _grid(cfg, (ns.x or 10_000,))
    ctx = cfg.context(grid[-1])
    rows = []
    trace: list[tuple[int, float, float]] = []
    want = list(grid)
    last = None
    for running in rankin_running(ctx, grid[-1], cfg.classifier.beta_tilde):
        if cfg.out_dir:
            trace.append((running.x, float(running.S), float(running.S_plus)))
        while want and running.x > want[0]:
            rows.append(_sums_row(ctx, want.pop(0), last))
        last = running
    while want:
        rows.append(_sums_row(ctx, want.pop(0), last))
    columns = ["x", "S", "S_plus", "count_plus", "first_moment", "second_moment", "theta"]
    report = _report(cfg, ctx, "sums", columns, rows)
    if cfg.out_dir and trace:
        from .plotting import plot_series

        plot_series(
            Path(cfg.out_dir) / "sums.png",
            [t[0] for t in trace],
            {"S(x)": [t[1] for t in trace], "S+(x)": [t[2] for t in trace]},
            f"Rankin-type sums, k={cfg.k}",
            "x",
            "sum over p <= x",
        )
    return report


def _sums_row(ctx: SkContext, x: int, last) -> list:
    zero = ctx.hp(0)
    S, S_plus, count = (last.S, last.S_plus, last.count_plus) if last is not None else (zero, zero, 0)
    if (S - S_plus).lower > 0:
        raise VerificationError(f"S(x) > S+(x) at x={x}")
    mom = moment_sums(ctx, x)
    return [x, S, S_plus, count, mom.first, mom.second, mom.theta]


def cmd_density(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    grid = _grid(cfg, (1000, 10_000))
    ctx = cfg.context(grid[-1])
    rows = [[r.x, r.prime_count, r.count_a, r.count_b, r.frac_a, r.frac_b] for r in density_profile(ctx, cfg.classifier, grid)]
    st_a = sato_tate_reference(cfg.classifier.beta, ctx.bits)
    st_b = sato_tate_reference(cfg.classifier.beta1, ctx.bits)
    report = _report(
        cfg,
        ctx,
        "density",
        ["x", "prime_count", "count_A", "count_B", "frac_A", "frac_B"],
        rows,
        summary={"sato_tate_A": st_a, "sato_tate_B": st_b},
    )
    if cfg.out_dir:
        from .plotting import plot_series

        xs = [r[0] for r in rows]
        plot_series(
            Path(cfg.out_dir) / "density.png",
            xs,
            {
                "A": [float(r[4]) for r in rows],
                "B": [float(r[5]) for r in rows],
                "semicircle A": [float(st_a)] * len(xs),
                "semicircle B": [float(st_b)] * len(xs),
            },
            f"prime class densities, k={cfg.k}",
            "x",
            "fraction of primes <= x",
            logx=True,
        )
    return report


def cmd_scan(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    limit = ns.scan_limit or cfg.N
    ctx = cfg.context(limit)
    up, low = bound_scans(ctx, limit, cfg.jobs)
    rows = []
    for rep in (up, low):
        for rank, row in enumerate(rep.extremal, start=1):
            rows.append([rep.kind, rank, row.n, row.log_ratio, row.statistic])
    summary = {
        "c1": up.constant,
        "c1_at": up.argmax,
        "c3": low.constant,
        "c3_at": low.argmax,
        "min_ratio": low.min_ratio,
        "min_ratio_at": low.argmin,
    }
    return _report(
        cfg, ctx, "scan", ["kind", "rank", "n", "log_ratio", "statistic"], rows, {"scan_limit": limit}, summary
    )


def cmd_window(cfg: RunConfig, ns: argparse.Namespace) -> Report:
    lo, hi = ns.window
    ctx = cfg.context(hi)
    rep = window_constants(ctx, cfg.classifier, (lo, hi))
    summary = {
        "e1": rep.e1,
        "e1_at": rep.e1_prime,
        "e2": rep.e2,
        "e2_at": rep.e2_prime,
        "exceptions": list(rep.exceptions),
    }
    rows = [[p] for p in rep.primes]
    return _report(cfg, ctx, "window", ["p"], rows, {"window": [lo, hi]}, summary)


COMMANDS: dict[str, tuple[Callable[[RunConfig, argparse.Namespace], Report], str]] = {
    "coeffs": (cmd_coeffs, "build or load the coefficient cache and summarise it"),
    "lambda": (cmd_lambda, "exact lambda_F(n) and r(n)"),
    "verify": (cmd_verify, "run the verification suites"),
    "classify": (cmd_classify, "classify primes p <= x into A, B, T"),
    "omega": (cmd_omega, "omega-growth report along an x grid"),
    "limits": (cmd_limits, "enumerate limit points above and below 1"),
    "sums": (cmd_sums, "Rankin-type sums and moments"),
    "density": (cmd_density, "densities of A and B along an x grid"),
    "scan": (cmd_scan, "exact scans for the upper and lower growth constants"),
    "window": (cmd_window, "two-sided constants for A-primes in a window"),
}


# -- argument parsing -------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--k", type=int, default=10, help=f"Siegel weight, one of {SUPPORTED_K}")
    g.add_argument("--N", type=int, default=DEFAULT_N, help="coefficient table truncation")
    g.add_argument("--prime-limit", type=int, default=None, help="a(p) available for p up to this (default: as needed)")
    g.add_argument("--beta", type=_fraction, default=Fraction(1, 2))
    g.add_argument("--beta1", type=_fraction, default=Fraction(1, 2))
    g.add_argument("--beta-tilde", type=_fraction, default=Fraction(1, 2))
    g.add_argument("--c10", type=_fraction, default=Fraction(7, 2))
    g.add_argument("--M", type=int, default=DEFAULT_M, help="prime-power truncation for certified bounds")
    g.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
    g.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="decimal places in reports")
    g.add_argument("--x-grid", type=_int_list, default=None, help="comma-separated x values")
    g.add_argument("--format", choices=FORMATS, default="json")
    g.add_argument("--cache-dir", default=None, help=f"coefficient cache (default ${CACHE_ENV} or ~/.cache/skmaass)")
    g.add_argument("--no-cache", action="store_true", help="neither read nor write a cache")
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--out-dir", default=None, help="also write the report and a PNG figure here")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="skmaass", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}
    subs["lambda"].add_argument("--n", type=_int_list, required=True, help="n or comma-separated list")
    subs["limits"].add_argument("--count", type=int, default=5)
    subs["omega"].add_argument("--side", choices=(A_SIDE, B_SIDE), default=A_SIDE)
    for name in ("classify", "sums"):
        subs[name].add_argument("--x", type=int, default=None)
    subs["scan"].add_argument("--scan-limit", type=int, default=None, help="scan 3 <= n <= this (default N)")
    subs["window"].add_argument("--window", type=_int_list, default=(5, 1000), help="lo,hi")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cache_dir = None if ns.no_cache else (ns.cache_dir or default_cache_dir())
    return RunConfig(
        k=ns.k,
        N=ns.N,
        prime_limit=ns.prime_limit,
        beta=ns.beta,
        beta1=ns.beta1,
        beta_tilde=ns.beta_tilde,
        c10=ns.c10,
        M=ns.M,
        precision_bits=ns.precision_bits,
        x_grid=ns.x_grid,
        format=ns.format,
        cache_dir=cache_dir,
        jobs=ns.jobs,
        digits=ns.digits,
        out_dir=ns.out_dir,
    )


def _emit(cfg: RunConfig, report: Report, out) -> None:
    text = report.render(cfg.format)
    out.write(text)
    if cfg.out_dir:
        target = Path(cfg.out_dir) / f"{report.command}.{cfg.format}"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8", newline="\n")


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if ns.command == "window" and len(ns.window) != 2:
        parser.error("--window takes exactly two values lo,hi")
    try:
        cfg = config_from_args(ns)
        handler, _ = COMMANDS[ns.command]
        report = handler(cfg, ns)
        _emit(cfg, report, out)
    except SuiteFailure as exc:
        _emit(cfg, exc.report, out)
        print(f"skmaass: {exc}", file=sys.stderr)
        return exc.exit_code
    except SkError as exc:
        print(f"skmaass: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"skmaass: I/O error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"skmaass: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
