from fractions import Fraction

import mpmath
import pytest

import oracles
from skmaass.classify import (
    ClassifierConfig,
    b_below,
    b_exceeds,
    classify,
    density_profile,
    in_t,
    moment_sums,
    rankin_running,
    rankin_sums,
    sato_tate_reference,
)
from skmaass.errors import ConfigError, RangeError


def test_config_normalises_and_validates():
    cfg = ClassifierConfig(beta=0.2, c10=3.5)
    assert cfg.beta == Fraction(1, 5) and cfg.c10 == Fraction(7, 2)
    for bad in (dict(beta=0), dict(beta1=2), dict(c10=-1), dict(M=0)):
        with pytest.raises(ConfigError):
            ClassifierConfig(**bad)


@pytest.mark.parametrize("p,b", [(2, -1.4584077), (3, -0.3769804), (5, -1.1744616), (7, 0.2115095)])
def test_normalised_coefficients(ctx10, p, b):
    assert float(ctx10.b(p)) == pytest.approx(b, abs=1e-7)


def test_exact_threshold_tests_agree_with_floats(ctx10):
    for level in (Fraction(1, 5), Fraction(1, 2), Fraction(3, 2)):
        for p in (2, 3, 5, 7, 11, 13, 101, 997):
            b = float(ctx10.b(p))
            assert b_exceeds(ctx10, p, level) == (b > level)
            assert b_below(ctx10, p, level) == (b < -level)


def test_classify_records(ctx10, cfg):
    rec = classify(ctx10, 2, cfg)
    assert rec.in_b and not rec.in_a and rec.in_t is False
    rec17 = classify(ctx10, 17, cfg)
    assert rec17.in_t is True and float(rec17.t_lower) == pytest.approx(0.9536, abs=1e-4)
    assert in_t(ctx10, 13, cfg) == (False, None)
    with pytest.raises(RangeError):
        classify(ctx10, 5003, cfg)


def test_density_profile(ctx10, cfg):
    rows = density_profile(ctx10, cfg, [100, 10, 1000])
    assert [r.x for r in rows] == [10, 100, 1000]
    assert rows[0].prime_count == 4 and rows[2].prime_count == 168
    for r in rows:
        assert r.count_a == sum(b_exceeds(ctx10, p, cfg.beta) for p in range(r.x + 1) if oracles.is_prime(p))
        assert r.frac_a.contains(Fraction(r.count_a, r.prime_count))


def test_sato_tate_reference():
    value = sato_tate_reference(Fraction(1, 2))
    assert float(value) == pytest.approx(0.3425188212, abs=1e-10)
    assert sato_tate_reference(Fraction(0)).contains(Fraction(1, 2))
    density = mpmath.quad(lambda t: 2 / mpmath.pi * mpmath.sin(t) ** 2, [0, mpmath.acos(0.25)])
    assert float(value) == pytest.approx(float(density), abs=1e-12)


def test_rankin_sums(ctx10):
    sums = rankin_sums(ctx10, 10, 0.5)
    assert float(sums.S) == pytest.approx(3.890674079, abs=1e-9)
    assert float(sums.S_plus) == pytest.approx(5.455617223, abs=1e-9)
    assert sums.count_plus == 2
    running = list(rankin_running(ctx10, 1000, 0.5))
    assert len(running) == 168
    assert all((r.S - r.S_plus).lower <= 0 for r in running)
    with pytest.raises(ConfigError):
        rankin_sums(ctx10, 10, 3)


def test_moment_sums(ctx10):
    mom = moment_sums(ctx10, 10)
    assert float(mom.second) == pytest.approx(3.937467199, abs=1e-9)
    assert float(mom.theta) == pytest.approx(5.347107531, abs=1e-9)
