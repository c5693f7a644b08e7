import json

import pytest

from qcurve_p1.errors import CacheCorruptionError, DomainError
from qcurve_p1.toprec import WCache
from qcurve_p1.verify.properties import all_properties
from qcurve_p1.verify.regressions import regression_checks
from qcurve_p1.verify.result import CheckResult, Report, combine
from qcurve_p1.verify.suite import SUITES, run_all


@pytest.fixture(scope="module")
def report():
    return run_all(6, 4)


def test_full_suite_passes(report):
    failed = [c.line() for c in report.checks if not c.passed]
    assert report.passed, failed
    ids = {c.check_id for c in report.checks}
    for expected in ("quantum-curve", "tau", "diff-rec", "variation/W", "variation/E", "section4",
                     "regression/Fg/3", "property/truncation", "property/s-cancellation"):
        assert any(i == expected or i.startswith(expected) for i in ids), expected


def test_report_is_deterministic(report):
    again = run_all(6, 4, jobs=3)
    assert again.to_json() == report.to_json()
    doc = json.loads(report.to_json())
    assert doc["parameters"] == {"N": 6, "euler_max": 4, "gmax": 3, "suite": "all"}


def test_semiclassical_run_skips():
    r = run_all(0, 1)
    assert r.passed
    assert r.skipped
    assert any("N >= 1" in s for s in r.skipped)


@pytest.mark.parametrize("suite", [s for s in SUITES if s != "all"])
def test_each_suite(suite):
    assert run_all(4, 3, suite=suite).passed


@pytest.mark.parametrize("kw", [dict(N=-1), dict(euler_max=-2), dict(jobs=0), dict(suite="nope"), dict(gmax=-1)])
def test_bad_parameters(kw):
    with pytest.raises(DomainError):
        run_all(**kw)


def test_tampered_cache_rejected(tmp_path):
    path = tmp_path / "w.json"
    c = WCache(str(path))
    c.ensure_upto(3)
    c.save()
    doc = json.loads(path.read_text())
    entry = doc["entries"]["0,3"][0]["coeff"]["terms"][0]
    entry["num"] = str(int(entry["num"]) + 1)
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheCorruptionError):
        run_all(2, 2, WCache(str(path)), suite="tau")


def test_regressions_and_properties(cache):
    assert all(r.passed for r in regression_checks(cache, 4))
    assert all(r.passed for r in all_properties(cache, 4, 4, 2))


def test_combine_reports_first_failure():
    ok = CheckResult("a", "x")
    bad = CheckResult("b", "y", "nonzero", "(g,n)=(1,1)")
    c = combine("all", "z", [ok, bad, CheckResult("c", "w", "other", "here")])
    assert not c.passed and c.where.startswith("b")
    assert combine("all", "z", [ok]).passed
    rep = Report({}, [ok, bad], [])
    assert not rep.passed
    assert "FAIL" in rep.text()
