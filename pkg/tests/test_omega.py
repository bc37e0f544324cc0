from fractions import Fraction

import pytest

from skmaass.classify import ClassifierConfig, b_exceeds
from skmaass.errors import RangeError
from skmaass.lift import certified_inf_ratio
from skmaass.omega import (
    build_nx_A,
    build_nx_B,
    bound_scans,
    window_constants,
    limit_point_enumeration,
    lower_bound_scan,
    nx_B_threshold,
    omega_report,
    upper_bound_scan,
)


def test_builders(ctx10):
    assert build_nx_A(ctx10, ClassifierConfig(beta=0.2), 10) == [7]
    assert build_nx_B(ctx10, ClassifierConfig(beta1=1), 4) == [5]
    assert nx_B_threshold(ClassifierConfig(beta1=0.5)) == 16
    with pytest.raises(RangeError, match="threshold"):
        build_nx_B(ctx10, ClassifierConfig(beta1=0.5), 15)
    with pytest.raises(RangeError):
        build_nx_A(ctx10, ClassifierConfig(), 6000)


def test_omega_report_signs(ctx10, cfg):
    rows = omega_report(ctx10, cfg, [4, 100, 1000], "A")
    assert rows[0].prime_count == 0 and rows[0].statistic.sign() == 0
    assert all(r.log_ratio.sign() == 1 for r in rows[1:])
    low = omega_report(ctx10, cfg, [100, 1000, 2000], "B")
    assert all(r.log_ratio.sign() == -1 for r in low)
    with pytest.raises(ValueError):
        omega_report(ctx10, cfg, [10], "C")


def test_small_scans(ctx10):
    up, low = bound_scans(ctx10, 10)
    assert up.argmax == 7 and float(up.constant) == pytest.approx(0.1176504561, abs=1e-9)
    assert low.argmax == 10 and float(low.constant) == pytest.approx(0.6927681733, abs=1e-9)
    assert low.argmin == 10 and float(low.min_ratio) == pytest.approx(0.316296, abs=1e-6)


def test_scan_order_and_jobs_invariance(ctx10):
    base = upper_bound_scan(ctx10, 2000)
    assert base.argmax == 273 and float(base.constant) == pytest.approx(0.3247, abs=1e-4)
    assert upper_bound_scan(ctx10, 2000, descending=True) == base
    assert upper_bound_scan(ctx10, 2000, jobs=3) == base
    low = lower_bound_scan(ctx10, 2000, jobs=2)
    assert low.argmax == 990 and low.argmin == 990
    with pytest.raises(RangeError):
        upper_bound_scan(ctx10, 2)


def test_limit_enumeration(ctx10):
    enum = limit_point_enumeration(ctx10, 3)
    assert [lp.p for lp in enum.above] == [7, 13, 19]
    assert [lp.p for lp in enum.below] == [2, 3, 5]
    assert enum.below[0].exact == Fraction(16, 27)
    with pytest.raises(RangeError):
        limit_point_enumeration(ctx10, 10_000)


def test_window_constants(ctx10):
    cfg = ClassifierConfig(beta=0.2)
    rep = window_constants(ctx10, cfg, (5, 100))
    assert rep.primes == (7, 13, 29, 37, 41, 67, 73, 89)
    assert rep.e1_prime == 7 and float(rep.e1) == pytest.approx(0.14797, abs=1e-5)
    assert rep.e2_prime == 67 and float(rep.e2) == pytest.approx(1.8982, abs=1e-4)
    assert rep.exceptions == ()
    for p in rep.primes:
        assert b_exceeds(ctx10, p, cfg.beta) and certified_inf_ratio(ctx10, p).lower > 1
    with pytest.raises(RangeError):
        window_constants(ctx10, cfg, (8, 12))
