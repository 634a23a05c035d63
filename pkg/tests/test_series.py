import math

import pytest
from flint import fmpq, fmpq_poly
from hypothesis import given, strategies as st

from isingff.series import (DivisionByZeroSeries, HalfSeries, NegativeArgumentForHalfPower,
                            NonUnitLeadingCoefficient, binomial_series, geometric_series, t_series)

TR = 16
coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6).map(lambda f: fmpq(f.numerator, f.denominator))


def series(base=st.integers(0, 3), step=st.sampled_from([1, 2])):
    return st.builds(lambda cs, b, s: HalfSeries(cs, base=b, step=s, trunc=TR),
                     st.lists(coeff, min_size=1, max_size=10), base, step)


units = st.lists(coeff, min_size=1, max_size=8).map(lambda cs: HalfSeries([1] + cs, trunc=TR))


@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == HalfSeries.zero(TR)


@given(units)
def test_unit_inverse(u):
    assert u * u.inverse() == HalfSeries.one(TR)


@given(units)
def test_exp_inverts_log(u):
    assert u.log().exp() == u


@given(units)
def test_square_root_squares_back(u):
    r = u.pow_rational(fmpq(1, 2))
    assert r * r == u
    assert u.pow_rational(fmpq(1, 3)) ** 3 == u


@given(series(step=st.just(2)), series(step=st.just(2)))
def test_leibniz(a, b):
    lhs = (a * b).derivative()
    rhs = a.derivative() * b + a * b.derivative()
    assert lhs.agrees(rhs)


@given(st.lists(coeff, min_size=1, max_size=6))
def test_reversion_is_an_involution(cs):
    s = HalfSeries([0, 1] + cs, trunc=TR)
    r = s.revert()
    assert s.compose(r).agrees(t_series(TR // 2))
    assert r.revert() == s


@given(series())
def test_json_round_trip(s):
    assert HalfSeries.from_json(s.to_json()) == s


def test_truncation_is_tracked():
    a = HalfSeries([1, 2, 3], trunc=6)
    b = HalfSeries([1, 1], trunc=20)
    assert (a * b).trunc == 6
    assert (a + b).trunc == 6


def test_geometric_and_binomial():
    g = geometric_series(6)
    assert [g.coeff_t(k) for k in range(6)] == [1] * 6
    s = binomial_series(fmpq(1, 2), 4)
    assert [s.coeff_t(k) for k in range(4)] == [1, fmpq(-1, 2), fmpq(-1, 8), fmpq(-1, 16)]


def test_division_errors():
    z = HalfSeries.zero(8)
    with pytest.raises(DivisionByZeroSeries):
        HalfSeries.one(8) / z
    with pytest.raises(NonUnitLeadingCoefficient):
        HalfSeries([2, 1], trunc=8).pow_rational(fmpq(1, 2))


def test_inverse_of_shifted_series_is_laurent():
    s = HalfSeries([0, 1, 1], trunc=8)  # t + t^2
    inv = s.inverse()
    assert inv.valuation() == -2
    assert (s * inv).agrees(HalfSeries.one(inv.trunc + 2))


def test_half_powers_and_numeric_evaluation():
    s = HalfSeries([1, 1], base=1, step=1, trunc=8)  # t^(1/2) + t
    v, _ = s.evaluate_numeric(0.25)
    assert v == pytest.approx(0.75)
    with pytest.raises(NegativeArgumentForHalfPower):
        s.evaluate_numeric(-0.25)


def test_geometric_value():
    v, tail = geometric_series(80).evaluate_numeric(0.5)
    assert math.isclose(v, 2.0, rel_tol=1e-15)
    assert tail < 1e-20


def test_mu_coefficients():
    s = HalfSeries([fmpq_poly([1, 2]), fmpq_poly([0, 0, 3])], trunc=4)
    assert s.mu
    assert s.mu_degree() == 2
    assert s.mu_coefficient(1) == HalfSeries([2, 0], trunc=4)
    assert s.subs_mu(fmpq(1, 3)) == HalfSeries([fmpq(5, 3), fmpq(1, 3)], trunc=4)
