import json
from fractions import Fraction

from skmaass.hpreal import HighPrecisionReal
from skmaass.report import Report, strip_timestamp


def _report(**kw):
    base = dict(
        command="demo",
        k=10,
        config={"k": 10, "beta": Fraction(1, 2)},
        columns=["n", "r", "exact", "flag"],
        rows=[[2, HighPrecisionReal.from_fraction(Fraction(15, 32)), Fraction(15, 32), None]],
        digits=6,
    )
    base.update(kw)
    return Report(**base)


def test_json_layout_and_key_order():
    data = json.loads(_report().to_json())
    assert list(data) == ["meta", "rows"]
    assert list(data["meta"]) == ["tool", "version", "command", "k", "config", "args", "digits", "summary", "timestamp"]
    assert data["meta"]["config"]["beta"] == "1/2"
    assert data["rows"] == [{"n": 2, "r": "0.468750", "exact": "15/32", "flag": None}]


def test_delimited():
    rep = _report()
    assert rep.render("csv") == "n,r,exact,flag\n2,0.468750,15/32,\n"
    assert rep.render("tsv").split("\n")[1] == "2\t0.468750\t15/32\t"


def test_big_integers_stay_exact():
    rep = _report(columns=["v"], rows=[[10**60 + 1]])
    assert json.loads(rep.to_json())["rows"][0]["v"] == 10**60 + 1


def test_timestamp_excluded_from_comparison():
    a = _report(timestamp="2020-01-01T00:00:00+00:00").to_json()
    b = _report(timestamp="2030-01-01T00:00:00+00:00").to_json()
    assert a != b and strip_timestamp(a) == strip_timestamp(b)
