import math

import pytest
from flint import fmpq
from hypothesis import given, strategies as st
from scipy.special import ellipe, ellipk, hyp2f1

from isingff.special import (DomainError, E_series, K_series, chebyshev_T, chebyshev_T_even_in_mu,
                             elliptic_numeric, f1_series, hyp2f1_series, nome_series,
                             one_minus_t_power, pochhammer, theta3_ratio_series,
                             theta4_over_theta3_series)


def test_K_and_E_leading_coefficients():
    K, E = K_series(4), E_series(4)
    assert [K.coeff_t(k) for k in range(4)] == [1, fmpq(1, 4), fmpq(9, 64), fmpq(25, 256)]
    assert [E.coeff_t(k) for k in range(4)] == [1, fmpq(-1, 4), fmpq(-3, 64), fmpq(-5, 256)]


def test_pochhammer():
    assert pochhammer(fmpq(1, 2), 3) == fmpq(15, 8)
    assert pochhammer(5, 0) == 1


@pytest.mark.parametrize("N", [0, 1, 2, 5])
def test_f1_matches_scipy_hypergeometric(N):
    t0 = 0.3
    want = t0 ** (N / 2) * float(pochhammer(fmpq(1, 2), N)) / math.factorial(N) * hyp2f1(0.5, N + 0.5, N + 1, t0)
    got, tail = f1_series(N, 80).evaluate_numeric(t0)
    assert got == pytest.approx(want, rel=1e-13)


def test_f1_exponents_are_half_integer_for_odd_N():
    s = f1_series(3, 5)
    assert s.valuation() == 3
    assert s.coeff(3) == fmpq(5, 16)


@given(st.floats(0.0, 0.999))
def test_agm_against_scipy(t0):
    # scipy's ellipk/ellipe take the parameter m = k^2 and carry the pi/2
    assert elliptic_numeric("K", t0) == pytest.approx(2 / math.pi * ellipk(t0), rel=1e-13)
    assert elliptic_numeric("E", t0) == pytest.approx(2 / math.pi * ellipe(t0), rel=1e-13)


def test_agm_against_series():
    K, _ = K_series(200).evaluate_numeric(0.5)
    E, _ = E_series(200).evaluate_numeric(0.5)
    assert abs(elliptic_numeric("K", 0.5) - K) < 1e-15
    assert abs(elliptic_numeric("E", 0.5) - E) < 1e-15


def test_agm_domain():
    with pytest.raises(DomainError):
        elliptic_numeric("K", 1.0)
    with pytest.raises(ValueError):
        elliptic_numeric("F", 0.1)


def test_chebyshev():
    assert chebyshev_T(3).coeffs() == [0, -3, 0, 4]
    # T_4(lambda) = 8 lambda^4 - 8 lambda^2 + 1 = 8 mu^2 - 8 mu + 1
    assert chebyshev_T_even_in_mu(2).coeffs() == [1, -8, 8]


def test_nome_leading_terms():
    q = nome_series(5)
    assert [q.coeff_t(k) for k in range(5)] == [0, fmpq(1, 16), fmpq(1, 32), fmpq(21, 1024), fmpq(31, 2048)]


def test_theta4_over_theta3_is_quarter_power():
    assert theta4_over_theta3_series(30) == one_minus_t_power(fmpq(1, 4), 30)


def test_theta3_ratio_at_lambda_one_is_one():
    th = theta3_ratio_series(20)
    assert th.subs_mu(1) == one_minus_t_power(0, 20)


def test_hyp2f1_terminates_for_negative_integer_a():
    s = hyp2f1_series(-2, fmpq(1, 2), 1, 6)
    assert [s.coeff_t(k) for k in range(4)] == [1, -1, fmpq(3, 8), 0]
