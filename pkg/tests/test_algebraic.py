import pytest
from flint import fmpq

from isingff.algebraic import (CLOSED_FORMS, PowerUnavailable, closed_form_series, curve,
                               curve_residual, special_op_check, theta_ratio_check)
from isingff.diffops import apply, build
from isingff.painleve import solve_regime


@pytest.mark.parametrize("which", ["c1", "c2", "c3"])
def test_closed_forms_match_recursion(which):
    mu, N = CLOSED_FORMS[which]
    assert closed_form_series(which, 30) == solve_regime("low", N, mu, 30).corr


def test_closed_form_is_rational_with_unit_constant():
    s = closed_form_series("c1", 6)
    assert s.coeff(0) == 1
    assert all(e % 2 == 0 for e, c in s.items() if c != 0)


def test_curve16_on_closed_form_and_on_eighth_power():
    assert curve_residual("curve16", closed_form_series("c1", 30), 30).is_zero()
    s = solve_regime("low", 0, fmpq(1, 2), 30).corr
    assert curve_residual("curve16", {8: s ** 8}, 30).is_zero()


def test_curve13_at_lambda_one_half():
    s = solve_regime("low", 0, fmpq(1, 4), 30).corr
    assert curve_residual("curve13", s, 30).is_zero()
    # a neighbouring lambda does not lie on the curve
    s = solve_regime("low", 0, fmpq(1, 5), 30).corr
    assert not curve_residual("curve13", s, 30).is_zero()


def test_missing_power():
    s = closed_form_series("c1", 10)
    with pytest.raises(PowerUnavailable):
        curve_residual("curve16", {3: s ** 3}, 10)


def test_curve_lookup():
    c = curve("curve16")
    assert c.degree() == 16
    with pytest.raises(KeyError):
        curve("curve99")


@pytest.mark.parametrize("op_id", ["L14_0", "L14_1", "L14_2", "L13_0"])
def test_special_operators(op_id):
    assert special_op_check(op_id, 30)


@pytest.mark.parametrize("op_id, N", [("L14_1", 1), ("L14_2", 2)])
def test_printed_special_operators_fail(op_id, N):
    op = build(op_id, printed=True)
    s = solve_regime("low", N, fmpq(1, 2), 40).corr
    assert not apply(op, s).is_zero()


def test_theta_resummation():
    assert theta_ratio_check(16)
    with pytest.raises(ValueError):
        theta_ratio_check(5)
