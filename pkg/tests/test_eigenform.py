import pytest

import oracles
from skmaass.eigenform import (
    CACHE_MAGIC,
    CoefficientTable,
    build_delta,
    build_eigenform,
    build_eisenstein,
    cache_paths,
    check_weight,
    coeff,
    coeff_prime_power,
    deligne_check,
    extend_primes,
    format_cache,
    load_or_build,
    normalized_b,
    prime_coefficients,
    read_cache,
    read_prime_cache,
    write_cache,
)
from skmaass.errors import CacheError, ConfigError, RangeError, VerificationError

K10_HEAD = [1, -528, -4284, 147712, -1025850, 2261952, 3225992, -8785920, -110787507]


def test_delta_matches_product_oracle():
    assert build_delta(40).tolist() == oracles.delta(40)


@pytest.mark.parametrize("weight", [4, 6, 10, 14])
def test_eisenstein_routes_agree(weight):
    N = 60
    assert build_eisenstein(weight, N).tolist() == oracles.eisenstein(weight, N)
    if weight in (10, 14):
        assert build_eisenstein(weight, N, via_product=True) == build_eisenstein(weight, N)


@pytest.mark.parametrize("k", [10, 12, 14])
def test_table_matches_oracle(k, oracle_a):
    table = build_eigenform(k, 120)
    assert list(table.values) == oracle_a[k]


def test_known_leading_coefficients():
    assert list(build_eigenform(10, 9).values[1:]) == K10_HEAD
    assert build_eigenform(12, 2).a(2) == -288
    assert build_eigenform(14, 2).a(2) == -48


def test_unsupported_weight():
    with pytest.raises(ConfigError, match="one-dimensional"):
        check_weight(11)
    with pytest.raises(ConfigError):
        build_eigenform(16, 10)


def test_table_requires_normalisation():
    with pytest.raises(ValueError):
        CoefficientTable(10, (0, 2, 3))


def test_recursion_and_multiplicativity(small_ctx):
    for k, ctx in small_ctx.items():
        table = ctx.table
        for n in range(1, table.N + 1):
            assert coeff(table, n) == table.a(n), (k, n)
        assert coeff_prime_power(table, 2, 4)[4] == table.a(16)


def test_prime_coefficients_match_table():
    table = build_eigenform(10, 400)
    primes = prime_coefficients(10, 400)
    assert all(table.a(p) == a for p, a in primes.items())
    assert prime_coefficients(10, 400, above=390) == {397: table.a(397)}


def test_extend_and_range_errors():
    table = build_eigenform(10, 50)
    with pytest.raises(RangeError):
        table.ap(53)
    with pytest.raises(RangeError):
        table.a(51)
    wide = extend_primes(table, 200)
    assert wide.prime_limit == 200
    assert wide.ap(199) == build_eigenform(10, 200).a(199)


def test_truncate_keeps_primes():
    table = build_eigenform(10, 100)
    short = table.truncate(10)
    assert short.N == 10
    assert short.ap(97) == table.a(97)
    with pytest.raises(RangeError):
        short.truncate(20)


def test_deligne_and_normalised_b():
    table = build_eigenform(10, 500)
    rep = deligne_check(table)
    assert rep.checked == 499
    assert all(0 <= m <= 1 for _, m in rep.tightest)
    assert float(normalized_b(table, 2)) == pytest.approx(-1.4584077, abs=1e-7)
    bad = CoefficientTable(10, (0, 1, 10**9))
    with pytest.raises(VerificationError):
        deligne_check(bad)


def test_parallel_build_is_identical():
    assert build_eigenform(10, 300, jobs=3) == build_eigenform(10, 300, jobs=1)


# -- cache ------------------------------------------------------------------


def test_cache_format_and_round_trip(tmp_path):
    table = build_eigenform(10, 10)
    path = write_cache(table, tmp_path / "t.cache")
    lines = path.read_text().split("\n")
    assert lines[0] == CACHE_MAGIC
    assert lines[1] == "# k=10 w=18 N=10"
    assert lines[3] == "2\t-528"
    back = read_cache(path, 10)
    assert back == table
    assert format_cache(back) == path.read_text()


def test_cache_truncates_on_read(tmp_path):
    table = build_eigenform(10, 50)
    path = write_cache(table, tmp_path / "t.cache")
    assert read_cache(path, 10, 20) == table.truncate(20)
    with pytest.raises(CacheError):
        read_cache(path, 10, 60)
    with pytest.raises(CacheError):
        read_cache(path, 12)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda s: s.replace(CACHE_MAGIC, "# other"),
        lambda s: s.replace("w=18", "w=20"),
        lambda s: s.replace("3\t-4284\n", ""),
        lambda s: s.replace("2\t-528", "2\tx"),
        lambda s: s.replace("1\t1\n", "1\t2\n"),
    ],
)
def test_corrupt_cache_rejected(tmp_path, mutate):
    path = write_cache(build_eigenform(10, 10), tmp_path / "t.cache")
    path.write_text(mutate(path.read_text()))
    with pytest.raises(CacheError):
        read_cache(path, 10)


def test_missing_cache_is_cache_error(tmp_path):
    with pytest.raises(CacheError):
        read_cache(tmp_path / "absent.cache")


def test_load_or_build_reuses_cache(tmp_path):
    table = load_or_build(10, 30, 100, tmp_path)
    table_path, primes_path = cache_paths(tmp_path, 10)
    assert table_path.exists() and primes_path.exists()
    limit, primes = read_prime_cache(primes_path, 10)
    assert limit == 100 and primes[97] == table.ap(97)
    again = load_or_build(10, 20, 100, tmp_path)
    assert again == table.truncate(20)
    assert table_path.read_text().count("\n") == 32
