import numpy as np
import pytest

from spin_errors import VerificationError
from verify_suites import CheckResult, appendix_suite, exact_check, require_all, residual_check, run_suite


def test_appendix_suite_passes():
    results = appendix_suite(seed=3)
    failed = [r.line() for r in results if not r.passed]
    assert not failed
    names = {r.name: r.value for r in results}
    assert names["dim spin(9) . (1, 0)"] == 15
    assert names["dim span T_{u,v}"] == 21
    assert names["dim so(7) . 1"] == 7


def test_algebra_suite_passes():
    results = run_suite("algebra", seed=4)
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_checks_and_lines():
    ok = residual_check("algebra", "small", 1e-12, 1e-10)
    bad = exact_check("appendix", "rank", 20, 21)
    assert ok.passed and not bad.passed
    assert ok.line().startswith("[  ok] algebra")
    assert "FAIL" in bad.line()
    assert not residual_check("x", "nan", float("nan"), 1.0).passed


def test_require_all_names_the_first_failure():
    results = [
        CheckResult("characters", "first", 0.0, True, "< 1e-08"),
        CheckResult("characters", "second", 0.5, False, "< 1e-08"),
        CheckResult("characters", "third", 0.7, False, "< 1e-08"),
    ]
    with pytest.raises(VerificationError) as excinfo:
        require_all(results)
    assert excinfo.value.identity == "second"
    assert excinfo.value.residual == pytest.approx(0.5)
    require_all(results[:1])


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("geometry")


def test_algebra_suite_lifts_loops_into_every_double_cover():
    names = [r.name for r in run_suite("algebra", seed=4)]
    for cover in ("Spin(3)", "Spin(6)", "MU(3)", "Sp(2) x U(1)", "Sp(3) x U(1)", "Sp(2) x Sp(1)", "Sp(3) x Sp(1)"):
        assert sum(name.endswith(f"deck element of {cover}") for name in names) == 1
    assert sum("loop twice" in name for name in names) == 7
