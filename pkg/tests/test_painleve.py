import pytest
from flint import fmpq

from isingff.painleve import (OrderTooLowToExtract, covariance_residual_check,
                              expected_leading_exponent, formfactor_series, lambda_coefficient,
                              rho_high, rho_low, riccati_residual, sigma_from_corr, sigma_residual,
                              solve_regime)
from isingff.series import HalfSeries
from isingff.special import E_series, f1_series, one_minus_t_power


@pytest.mark.parametrize("regime", ["low", "high"])
@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_symbolic_solution_satisfies_sigma_form(regime, N):
    r = solve_regime(regime, N, None, 16)
    assert sigma_residual(r.sigma, N).is_zero()


@pytest.mark.parametrize("regime", ["low", "high"])
def test_sigma_round_trip_through_correlation(regime):
    r = solve_regime(regime, 2, fmpq(1, 3), 20)
    s = sigma_from_corr(r.corr, regime, 2).sigma
    assert s.agrees(r.sigma, 2 * 18)


def test_low_temperature_lambda_one_slices():
    assert solve_regime("low", 0, 1, 30).corr == HalfSeries.one(60)
    assert solve_regime("low", 1, 1, 30).corr == E_series(30)


@pytest.mark.parametrize("N", [0, 2])
def test_lambda_zero_slices(N):
    q = one_minus_t_power(fmpq(1, 4), 20)
    assert solve_regime("low", N, 0, 20).corr == q
    assert solve_regime("high", N, 0, 20).corr == (q * f1_series(N, 20)).truncate(40)


@pytest.mark.parametrize("N", [0, 1, 3])
def test_lambda_zero_high_sigma_is_riccati(N):
    s = solve_regime("high", N, 0, 20).sigma
    assert riccati_residual(s, N).truncate(s.trunc - 2).is_zero()


def test_grading_matches_expected_exponents():
    r = solve_regime("low", 1, None, 20)
    for n in (1, 2, 3):
        assert lambda_coefficient(r, n).valuation() == expected_leading_exponent("low", 1, n)
    r = solve_regime("high", 1, None, 20)
    for n in (0, 1, 2):
        assert lambda_coefficient(r, n).valuation() == expected_leading_exponent("high", 1, n)


def test_f1_recovered_from_high_regime():
    assert formfactor_series(1, 3, 25) == f1_series(3, 25)


def test_f6_leading_terms():
    s = formfactor_series(6, 0, 11)
    assert s.coeff_t(9) == fmpq(1, 1073741824)
    assert s.coeff_t(10) == fmpq(37, 8589934592)
    assert formfactor_series(6, 1, 13).coeff_t(12) == fmpq(7, 4398046511104)


def test_order_too_low():
    r = solve_regime("low", 0, None, 10)
    with pytest.raises(OrderTooLowToExtract):
        lambda_coefficient(r, 4)


def test_numeric_mu_rejects_lambda_coefficient():
    with pytest.raises(ValueError):
        lambda_coefficient(solve_regime("low", 0, fmpq(1, 2), 10), 1)


@pytest.mark.parametrize("N", ["1/2", -1])
def test_bad_N(N):
    with pytest.raises(ValueError):
        solve_regime("low", N, None, 10)


def test_bad_regime():
    with pytest.raises(ValueError):
        solve_regime("middle", 0, None, 10)


@pytest.mark.parametrize("N", range(5))
def test_free_coefficients_against_other_routes(N):
    from isingff.formfactor import ek_table, ek_to_series, f2_nested_series

    f2 = f2_nested_series(N, N + 3)
    assert rho_low(N) == f2.coeff_t(N + 1)
    f3 = ek_to_series(ek_table(3, N), 2 * N + 4)
    assert rho_high(N) == f3.coeff(3 * N + 4)


def test_covariance_maps():
    assert covariance_residual_check("identity").is_poly()
    for which in ("kramers", "mirror"):
        f = covariance_residual_check(which)
        assert not f.num.is_zero()
    with pytest.raises(ValueError):
        covariance_residual_check("rotation")
