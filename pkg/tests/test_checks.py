import pytest

from isingff.checks import SUITES, run_checks, suite_checks


@pytest.mark.parametrize("suite", ["painleve", "direct-sum", "scaling", "algebraic", "quadrature"])
def test_suite_passes(suite):
    rows = run_checks(suite_checks(suite, max_n=2, max_N=1))
    assert rows and all(r["status"] == "pass" for r in rows), [r for r in rows if r["status"] != "pass"]


def test_operators_suite_small():
    rows = run_checks(suite_checks("operators", max_n=1, max_N=0))
    assert all(r["status"] == "pass" for r in rows)


def test_crash_is_reported_not_raised():
    def boom():
        raise ArithmeticError("bad")
    rows = run_checks([("x", boom)])
    assert rows == [{"name": "x", "status": "error", "detail": "ArithmeticError: bad"}]


def test_all_is_the_union():
    names = {n for n, _ in suite_checks("all", 1, 0)}
    assert names == {n for s in SUITES for n, _ in suite_checks(s, 1, 0)}
    with pytest.raises(ValueError):
        suite_checks("nope")
