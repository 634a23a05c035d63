import pytest
from flint import fmpq, fmpq_mat
from hypothesis import given, strategies as st

from isingff.formfactor import (ERRATA, EKPoly, NotTabulated, bareiss_det, ek_tabulated, ek_table,
                                ek_to_series, exp_to_formfactor, f2_nested_series, g3_series,
                                toeplitz_corr_low, toeplitz_symbol_coeff)
from isingff.painleve import formfactor_series, solve_regime
from isingff.series import HalfSeries, SeriesError
from isingff.special import E_series, K_series, f1_series


def test_f2_first_coefficients():
    s = f2_nested_series(0, 4)
    assert [s.coeff_t(k) for k in range(4)] == [0, fmpq(1, 4), fmpq(5, 32), fmpq(15, 128)]


@pytest.mark.parametrize("N", [0, 1, 3])
def test_f2_nested_equals_recursion(N):
    assert f2_nested_series(N, 30) == formfactor_series(2, N, 30)


def test_f2_00_is_quadratic_in_K_and_E():
    K, E = K_series(30), E_series(30)
    assert f2_nested_series(0, 30) == (K * (K - E)).scale(fmpq(1, 2))


@pytest.mark.parametrize("j, N", [(2, 1), (3, 0), (4, 2), (5, 3), (7, 1)])
def test_tables_against_recursion(j, N):
    assert ek_to_series(ek_table(j, N), 30) == formfactor_series(j, N, 30)


def test_table_index():
    idx = ek_tabulated()
    assert (9, 1) in idx and (6, 0) not in idx
    with pytest.raises(NotTabulated):
        ek_table(6, 0)


def test_printed_3_3_is_not_a_series():
    # the misplaced factor of t produces a negative power of t
    with pytest.raises(SeriesError):
        ek_to_series(ek_table(3, 3, printed=True), 20)
    assert ek_to_series(ek_table(3, 3), 20) == formfactor_series(3, 3, 20)


def test_printed_8_1_is_off_by_sixteen():
    printed = ek_to_series(ek_table(8, 1, printed=True), 30)
    assert printed.scale(16) == formfactor_series(8, 1, 30)
    assert set(ERRATA) == {(3, 3), (8, 1)}


def test_ekpoly_json():
    p = ek_table(2, 0)
    assert isinstance(p, EKPoly)
    d = p.to_json()
    assert d and p.degree() == 2


@pytest.mark.parametrize("N", range(4))
def test_g3_against_exponential_regrouping(N):
    # f^(3)_N = G^(3)_N + f^(1)_N F^(2)_{N+1}, with F^(2) = f^(2)
    order = 22
    rhs = formfactor_series(3, N, order) - f1_series(N, order) * formfactor_series(2, N + 1, order)
    assert g3_series(N, order).agrees(rhs.normalize(), 2 * order)


def test_exp_regrouping_low():
    f2, f4 = formfactor_series(2, 1, 20), formfactor_series(4, 1, 20)
    F = {2: f2, 4: f4 - (f2 * f2).scale(fmpq(1, 2))}
    out = exp_to_formfactor(F)
    assert out[2] == f2 and out[4].agrees(f4)


def test_exp_regrouping_high_uses_G_terms():
    N, order = 1, 20
    F = {2: formfactor_series(2, N + 1, order)}
    G = {1: f1_series(N, order), 3: g3_series(N, order)}
    out = exp_to_formfactor(F, G, regime="high")
    assert out[3].agrees(formfactor_series(3, N, order))
    with pytest.raises(ValueError):
        exp_to_formfactor(F, None, regime="high")


def test_symbol_coefficients_start_at_alpha_abs_k():
    for k in (-2, 0, 3):
        s = toeplitz_symbol_coeff(k, 12)
        assert s.valuation() == abs(k)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_toeplitz_matches_recursion(N):
    assert toeplitz_corr_low(N, 16) == solve_regime("low", N, 1, 16).corr


def test_toeplitz_N1_is_E():
    assert toeplitz_corr_low(1, 20) == E_series(20)


@given(st.lists(st.integers(-9, 9), min_size=9, max_size=9))
def test_bareiss_matches_flint(entries):
    M = [[fmpq(x) for x in entries[3 * i:3 * i + 3]] for i in range(3)]
    want = fmpq_mat(3, 3, entries).det()
    try:
        got = bareiss_det(M)
    except ZeroDivisionError:
        # a zero pivot; the series use has a unit pivot at t = 0
        return
    assert got == want
