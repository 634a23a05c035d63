import pytest
from flint import fmpq, fmpq_poly
from hypothesis import given, strategies as st

from isingff.algebra import RatFunc
from isingff.diffops import (ERRATA, NOreOp, NotTabulated, OreOp, VariableMismatch, apply,
                             bessel_i0_series, build, build_symbolic, checked_coefficients,
                             compose, conjugate_power, multiply, proportional_eq, right_divide,
                             scale_limit, sym_power, table_ids, transport_search)
from isingff.series import HalfSeries
from isingff.special import E_series, f1_series, one_minus_t_power

T = fmpq_poly([0, 1])
small = st.integers(-4, 4)
coef = st.lists(small, min_size=1, max_size=3).map(lambda cs: RatFunc(fmpq_poly(cs)))
ops = st.lists(coef, min_size=1, max_size=4).map(OreOp).filter(lambda o: not o.is_zero())
units = st.lists(small, min_size=0, max_size=8).map(lambda cs: HalfSeries([1] + cs, trunc=24))


def rf(num, den=(1,)):
    return RatFunc(fmpq_poly(list(num)), fmpq_poly(list(den)))


@given(ops, ops, ops)
def test_multiplication_is_associative(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert multiply(a, b + c) == multiply(a, b) + multiply(a, c)


@given(coef)
def test_commutation_rule(f):
    D = OreOp.D()
    assert multiply(D, OreOp.const(f)) == OreOp([f.derivative(), f])


@given(ops, ops, units)
def test_apply_respects_products(a, b, s):
    lhs = apply(multiply(a, b), s)
    rhs = apply(a, apply(b, s))
    assert lhs.agrees(rhs)


@given(ops, ops)
def test_right_division_recovers_factor(a, b):
    q, r = right_divide(multiply(a, b), b)
    assert r.is_zero()
    assert q == a


@given(ops, ops)
def test_right_division_identity(a, b):
    q, r = right_divide(a, b)
    assert multiply(q, b) + r == a
    assert r.order < b.order


@given(ops, coef)
def test_proportional_under_left_scaling(a, f):
    if f.is_zero():
        return
    assert proportional_eq(a, a.lmul(f))
    assert not proportional_eq(a, a + OreOp.D().lmul(f).d_left().d_left().d_left().d_left())


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        OreOp.D("t") + OreOp.D("x")


def independent_L2(N):
    # D^2 + (2t-1)/((t-1)t) D - 1/(4t) + 1/(4(t-1)) - N^2/(4t^2)
    N2 = fmpq(N) ** 2
    c1 = rf([-1, 2], [0, -1, 1])
    c0 = rf([-fmpq(1, 4)], [0, 1]) + rf([fmpq(1, 4)], [-1, 1]) + rf([-N2 / 4], [0, 0, 1])
    return OreOp([c0, c1, RatFunc(1)])


@pytest.mark.parametrize("N", range(5))
def test_L2_table_equals_displayed_form(N):
    assert build("L2", N) == independent_L2(N)


@pytest.mark.parametrize("N", range(5))
def test_L2_kills_f1(N):
    assert apply(build("L2", N), f1_series(N, 40)).is_zero()


@pytest.mark.parametrize("N", range(3))
def test_Lh_kills_the_weighted_f1(N):
    s = one_minus_t_power(fmpq(1, 4), 40) * f1_series(N, 40)
    assert apply(build("Lh", N), s).is_zero()
    assert not apply(build("Lh", N), f1_series(N, 40)).is_zero()


def test_LE_kills_E():
    assert apply(build("LE"), E_series(40)).is_zero()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_symmetric_power_kills_powers_of_solution(k):
    y = f1_series(1, 40)
    S = sym_power(build("L2", 1), k)
    assert S.order == k + 1
    assert apply(S, y ** k).is_zero()


def test_sym_power_one_is_the_operator():
    L = build("L2", 2)
    assert proportional_eq(sym_power(L, 1), L)


def test_printed_sym2_display_needs_the_t_squared():
    S = sym_power(build("L2", 2), 2)
    assert proportional_eq(S, build("Sym2_L2", 2))
    assert not proportional_eq(S, build("Sym2_L2", 2, printed=True))
    # N = 0 hides the misprint, since it sits on the N^2 term
    assert proportional_eq(sym_power(build("L2", 0), 2), build("Sym2_L2", 0, printed=True))


def test_printed_M4_1_fails_only_at_N_1():
    _, r = right_divide(build("F3", 1), build("M4", 1, printed=True))
    assert not r.is_zero()
    _, r = right_divide(build("F3", 1), build("M4", 1))
    assert r.is_zero()
    assert build("M4", 0, printed=True) == build("M4", 0)


def test_errata_registry():
    assert set(ERRATA) == {"M4_1", "Sym2_L2", "L14_1", "L14_2"}


def test_F_products():
    assert build("F1", 2) == build("L2", 2)
    assert build("F4", 1) == compose(build("L5", 1), build("L3", 1), build("L1", 1))
    assert build("F0", 3) == OreOp.const(1)


def test_lookup_errors():
    with pytest.raises(NotTabulated):
        build("L11", 1)
    with pytest.raises(ValueError):
        build("L2")
    with pytest.raises(NotTabulated):
        build("M4", fmpq(1, 2))


def test_table_ids_cover_the_factors():
    ids = set(table_ids())
    assert {f"L{k}" for k in range(1, 11)} <= ids
    assert {f"L{k}scal" for k in range(1, 11)} <= ids


def test_apply_counts_checked_coefficients():
    op = build("F3", 0)
    s = f1_series(0, 40)
    out = apply(op, s)
    assert out.is_zero()
    assert checked_coefficients(op, s) == 40
    assert out.trunc >= 2 * 40 - 2 * (op.order + op.pole_depth())


def test_instantiate_matches_symbolic_build():
    nop = build_symbolic("L2")
    assert isinstance(nop, NOreOp)
    assert nop.instantiate(fmpq(3)) == build("L2", 3)
    assert (nop * nop).instantiate(fmpq(2)) == multiply(build("L2", 2), build("L2", 2))


def test_scale_limit_of_L2():
    target = OreOp([RatFunc(fmpq_poly([0, -1])), RatFunc(4), RatFunc(fmpq_poly([0, 4]))], "x")
    lim = scale_limit(build_symbolic("L2"))
    assert lim.var == "x"
    assert proportional_eq(lim, target)


def test_bessel_series_is_annihilated():
    y = bessel_i0_series(40)
    assert apply(build("Bessel"), y).is_zero()
    assert y.coeff_t(2) == fmpq(1, 16)


def test_transport_search_finds_the_printed_map():
    y = bessel_i0_series(40)
    found = transport_search(build("L3scal"), y * y, 3, 2, 30)
    printed = OreOp([RatFunc(fmpq_poly([0, -1])), RatFunc(2), RatFunc(fmpq_poly([0, 1]))], "x")
    assert any(proportional_eq(w, printed) for w in found)
    assert transport_search(build("L3scal"), y, 3, 2, 30) == []


def test_transport_for_the_bessel_cube_is_unique():
    y = bessel_i0_series(50)
    found = transport_search(build("L4scal"), y ** 3, 3, 2, 35)
    x = lambda *cs: RatFunc(fmpq_poly(list(cs)))
    W = OreOp([x(0, fmpq(-9, 8)), x(fmpq(3, 2), 0, fmpq(-9, 4)), x(0, fmpq(7, 2)), x(0, 0, 1)], "x")
    assert len(found) == 1 and proportional_eq(found[0], W)
    assert apply(multiply(build("L4scal"), W), y ** 3).truncate(70).is_zero()


def test_conjugate_power():
    op = build("L2", 1)
    s = f1_series(0, 30)
    tpow = HalfSeries.monomial(1, 4, 30)  # t^2
    lhs = apply(conjugate_power(op, 2), s)
    rhs = apply(op, (tpow * s).truncate(60)).shift(-4)
    assert lhs.agrees(rhs)


def test_json_shape():
    d = build("L2", 1).to_json()
    assert d["var"] == "t"
    assert [c["D"] for c in d["coeffs"]] == [0, 1, 2]
