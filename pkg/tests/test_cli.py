import io
import json

import pytest

from skmaass.cli import RunConfig, main
from skmaass.errors import ConfigError
from skmaass.report import strip_timestamp


@pytest.fixture(scope="module")
def cache(tmp_path_factory):
    return str(tmp_path_factory.mktemp("cache"))


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return json.loads(text)["rows"]


def test_coeffs_writes_cache(tmp_path):
    code, text = run("coeffs", "--k", "10", "--N", "10", "--cache-dir", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "skmaass-k10.cache").read_text().split("\n")
    assert lines[3] == "2\t-528"
    summary = rows(text)[0]
    assert summary["N"] == 10 and summary["min_abs"] == 1


def test_unsupported_weight_exit_code(tmp_path, capsys):
    code, _ = run("coeffs", "--k", "11", "--cache-dir", str(tmp_path))
    assert code == 2
    assert "one-dimensional" in capsys.readouterr().err


def test_lambda(cache):
    code, text = run("lambda", "--k", "10", "--N", "50", "--n", "1,2,6", "--cache-dir", cache)
    assert code == 0
    got = {r["n"]: r for r in rows(text)}
    assert got[1]["lambda"] == 1
    assert got[2]["lambda"] == 240 and got[2]["r"].startswith("0.46875000")
    assert got[6]["lambda"] == 5270400


def test_lambda_large_prime_extends_range(cache):
    code, text = run("lambda", "--N", "50", "--n", "101", "--cache-dir", cache, "--format", "csv")
    assert code == 0 and text.startswith("n,lambda,r,r_exact\n101,")


def test_verify_minimal_and_default(tmp_path):
    assert run("verify", "--N", "3", "--cache-dir", str(tmp_path))[0] == 0
    code, text = run("verify", "--N", "400", "--cache-dir", str(tmp_path))
    assert code == 0
    assert [r["suite"] for r in rows(text)] == ["positivity", "deligne", "recursion", "alpha", "limits"]


def test_verify_detects_corrupted_cache(tmp_path, capsys):
    assert run("coeffs", "--N", "100", "--cache-dir", str(tmp_path))[0] == 0
    path = tmp_path / "skmaass-k10.cache"
    path.write_text(path.read_text().replace("2\t-528\n", "2\t528\n"))
    code, text = run("verify", "--N", "100", "--cache-dir", str(tmp_path))
    assert code == 1
    assert "suite 'recursion'" in capsys.readouterr().err
    assert rows(text)[-1]["status"] == "FAIL"


def test_limits(cache):
    code, text = run("limits", "--k", "10", "--count", "1", "--N", "50", "--cache-dir", cache)
    assert code == 0
    got = {r["p"]: r for r in rows(text)}
    assert got[2]["L"].startswith("0.592592") and got[2]["L_exact"] == "16/27"
    assert got[7]["L"].startswith("1.075211")


def test_sums(cache):
    code, text = run("sums", "--k", "10", "--x", "10", "--beta-tilde", "0.5", "--N", "50", "--cache-dir", cache)
    assert code == 0
    (row,) = rows(text)
    assert abs(float(row["S"]) - 3.8907) < 1e-3
    assert abs(float(row["S_plus"]) - 5.4556) < 1e-3


def test_omega_empty_product(cache):
    code, text = run("omega", "--side", "A", "--x-grid", "4", "--N", "50", "--cache-dir", cache)
    assert code == 0
    (row,) = rows(text)
    assert row["prime_count"] == 0 and float(row["statistic"]) == 0


def test_range_error_exit_code(cache, capsys):
    code, _ = run("omega", "--side", "B", "--x-grid", "10", "--N", "50", "--cache-dir", cache)
    assert code == 4
    code, _ = run("omega", "--x-grid", "500", "--N", "50", "--prime-limit", "100", "--cache-dir", cache)
    assert code == 4


def test_config_errors(cache):
    assert run("lambda", "--n", "2", "--beta", "3", "--cache-dir", cache)[0] == 2
    assert run("lambda", "--n", "2", "--jobs", "0", "--cache-dir", cache)[0] == 2
    with pytest.raises(ConfigError):
        RunConfig(k=10, N=1)


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("coeffs", "--N", "10", "--cache-dir", str(blocker / "sub"))[0] == 3


def test_reports_deterministic_and_job_invariant(cache):
    args = ["scan", "--N", "300", "--cache-dir", cache]
    _, one = run(*args, "--jobs", "1")
    _, eight = run(*args, "--jobs", "8")
    _, again = run(*args, "--jobs", "1")
    assert strip_timestamp(one) == strip_timestamp(eight) == strip_timestamp(again)
    summary = json.loads(one)["meta"]["summary"]
    assert summary["c1_at"] > 0 and summary["min_ratio_at"] > 0


def test_meta_snapshot(cache):
    _, text = run("density", "--x-grid", "10,40", "--N", "50", "--beta", "0.25", "--cache-dir", cache)
    meta = json.loads(text)["meta"]
    assert meta["command"] == "density" and meta["k"] == 10
    assert meta["config"]["beta"] == "1/4" and meta["config"]["x_grid"] == [10, 40]
    assert "jobs" not in meta["config"]


def test_other_commands(cache):
    code, text = run("classify", "--x", "30", "--N", "50", "--cache-dir", cache, "--format", "tsv")
    assert code == 0 and text.split("\n")[0] == "p\tb\tin_A\tin_B\tin_T\tinf_ratio_lower"
    code, text = run("window", "--window", "5,50", "--beta", "0.2", "--N", "50", "--cache-dir", cache)
    assert code == 0 and json.loads(text)["meta"]["summary"]["e1_at"] == 7


def test_out_dir_writes_report_and_figures(cache, tmp_path):
    out = tmp_path / "out"
    for argv in (
        ["limits", "--count", "2"],
        ["omega", "--x-grid", "20,40"],
        ["sums", "--x", "40"],
        ["density", "--x-grid", "20,40"],
        ["classify", "--x", "40"],
    ):
        code, text = run(*argv, "--N", "50", "--cache-dir", cache, "--out-dir", str(out), "--format", "csv")
        assert code == 0
        assert (out / f"{argv[0]}.csv").read_text() == text
    for name in ("limits", "omega-A", "sums", "density", "classify"):
        assert (out / f"{name}.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
