"""Named verification checks grouped into suites.

Every check is a module-level function returning ``(ok, detail)`` so suites
can be fanned out over a process pool. ``suite_checks`` returns the work
list for a suite; ``run_checks`` executes it and sorts the report by name.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, List, Tuple

from flint import fmpq, fmpq_poly

from .algebra import RatFunc, rat_str
from .diffops import (OreOp, apply, build, build_symbolic, bessel_i0_series, checked_coefficients,
                      compose, multiply, proportional_eq, right_divide, scale_limit, sym_power)
from .formfactor import ek_tabulated, ek_table, ek_to_series, f2_nested_series, toeplitz_corr_low
from .painleve import (covariance_residual_check, expected_leading_exponent, formfactor_series,
                       lambda_coefficient, solve_regime)
from .special import E_series, K_series, elliptic_numeric, f1_series

SUITES = ("painleve", "operators", "russian-doll", "direct-sum", "scaling", "algebraic", "quadrature")

Check = Tuple[str, Callable[[], Tuple[bool, str]]]


# ---------------------------------------------------------------- painleve

def check_grading(regime: str, N: int, nmax: int = 3):
    r = solve_regime(regime, N, None, expected_leading_exponent(regime, N, nmax) // 2 + 4)
    for n in range(1, nmax + 1):
        v = lambda_coefficient(r, n).valuation()
        if v != expected_leading_exponent(regime, N, n):
            return False, f"mu^{n} starts at t^({v}/2)"
    return True, f"mu^1..mu^{nmax} start at the expected exponents"


def check_f2_routes(order: int = 61):
    tr = 2 * order
    a = f2_nested_series(0, order)
    K, E = K_series(order), E_series(order)
    b = (K * (K - E)).scale(fmpq(1, 2)).truncate(tr)
    c = formfactor_series(2, 0, order)
    ok = a.agrees(b, tr) and b.agrees(c, tr)
    return ok, f"nested 2F1, K(K-E)/2 and recursion below t^{order}"


def check_toeplitz(N: int, order: int = 31):
    ok = solve_regime("low", N, 1, order).corr.agrees(toeplitz_corr_low(N, order), 2 * order)
    return ok, f"mu=1 recursion vs Toeplitz determinant below t^{order}"


def check_ek_table(j: int, N: int, order: int = 41):
    ok = ek_to_series(ek_table(j, N), order).agrees(formfactor_series(j, N, order), 2 * order)
    return ok, f"tabulated polynomial vs recursion below t^{order}"


def check_covariance(which: str):
    f = covariance_residual_check(which)
    return True, f"residual maps to ({f}) times itself"


def painleve_checks(max_N: int = 3) -> List[Check]:
    out: List[Check] = []
    for reg in ("low", "high"):
        for N in range(max_N + 1):
            out.append((f"grading/{reg}/N{N}", partial(check_grading, reg, N)))
    out.append(("f2/three-routes", check_f2_routes))
    for N in range(1, max_N + 2):
        out.append((f"toeplitz/N{N}", partial(check_toeplitz, N)))
    for j, N in ek_tabulated():
        out.append((f"ek-table/f{j}_N{N}", partial(check_ek_table, j, N)))
    out.append(("covariance/kramers", partial(check_covariance, "kramers")))
    out.append(("covariance/mirror", partial(check_covariance, "mirror")))
    return out


# ---------------------------------------------------------------- operators

def _ff_order(i_values, N: int, need: int) -> int:
    return max((expected_leading_exponent("low" if i % 2 == 0 else "high", N, i // 2) + 1) // 2
               for i in i_values) + need


def check_annihilation(j: int, N: int, need: int = 51):
    op = build(f"F{j}", N)
    iv = list(range(2 - j % 2, j + 1, 2))
    order = _ff_order(iv, N, need)
    worst = None
    for i in iv:
        s = formfactor_series(i, N, order)
        out = apply(op, s)
        n = checked_coefficients(op, s)
        if not out.is_zero():
            return False, f"F{j} f^({i}) nonzero at t^({out.valuation()}/2)"
        worst = n if worst is None else min(worst, n)
    if worst < need:
        return False, f"only {worst} coefficients checked"
    return True, f"kills f^(i), i={iv}; at least {worst} coefficients"


def check_intertwiner(kind: str, N: int):
    L2 = build("L2", N)
    if kind == "sym2":
        lhs = multiply(build("L3", N), build("U", N))
        rhs = multiply(build("V", N), sym_power(L2, 2))
    else:
        lhs = multiply(build("L4", N), build("A", N))
        rhs = multiply(build("B", N), sym_power(L2, 3))
    return lhs == rhs, "left and right products identical"


def check_m4q(N: int, order: int = 41):
    op = multiply(build("M4", N), build("Q", N))
    s = f1_series(N, order + op.order + op.pole_depth() + 2) ** 3
    out = apply(op, s)
    ok = out.truncate(min(out.trunc, 2 * order)).is_zero() and out.trunc >= 2 * order
    return ok, f"M4 Q (f1)^3 vanishes below t^{order}"


def operators_checks(max_N: int = 3, max_j: int = 9) -> List[Check]:
    out: List[Check] = []
    for j in range(1, max_j + 1):
        for N in range(max_N + 1):
            out.append((f"annihilate/F{j}/N{N}", partial(check_annihilation, j, N)))
    for N in range(6):
        out.append((f"intertwine/sym2/N{N}", partial(check_intertwiner, "sym2", N)))
        out.append((f"intertwine/sym3/N{N}", partial(check_intertwiner, "sym3", N)))
    for N in range(3):
        out.append((f"m4q/N{N}", partial(check_m4q, N)))
    return out


# ---------------------------------------------------------------- structure

def check_right_division(num: str, den: str, N: int):
    q, r = right_divide(build(num, N), build(den, N))
    return r.is_zero(), f"{num} = q {den}, quotient order {q.order}"


def russian_doll_checks(max_n: int = 4, max_N: int = 3) -> List[Check]:
    out: List[Check] = []
    for n in range(1, max_n + 1):
        for N in range(max_N + 1):
            for a, b in ((2 * n + 1, 2 * n - 1), (2 * n, 2 * n - 2)):
                out.append((f"doll/F{a}/F{b}/N{N}", partial(check_right_division, f"F{a}", f"F{b}", N)))
    return out


def direct_sum_checks() -> List[Check]:
    out: List[Check] = []
    for N in range(3):
        out.append((f"direct-sum/F3/L2/N{N}", partial(check_right_division, "F3", "L2", N)))
        out.append((f"direct-sum/F3/M4/N{N}", partial(check_right_division, "F3", "M4", N)))
        out.append((f"direct-sum/F5/M4/N{N}", partial(check_right_division, "F5", "M4", N)))
    return out


# ---------------------------------------------------------------- scaling

def _x(p) -> RatFunc:
    return RatFunc(fmpq_poly(p))


def bessel_reference() -> OreOp:
    return OreOp([_x([0, -1]), _x([4]), _x([0, 4])], "x")


def check_scale_L2():
    return proportional_eq(scale_limit(build_symbolic("L2")), bessel_reference()), "L2 -> 4x D^2 + 4 D - x"


def scal_product(j: int) -> OreOp:
    from .diffops import _f_factors
    return compose(*[build(name + "scal") for name in _f_factors(j)])


def check_scale_F(j: int):
    ok = proportional_eq(scale_limit(build_symbolic(f"F{j}")), scal_product(j))
    return ok, f"scaled F{j} vs product of scaled factors"


def check_bessel_square(order: int = 61):
    y = bessel_i0_series(order + 12)
    inner = OreOp([_x([0, -1]), _x([2]), _x([0, 1])], "x")
    out = apply(multiply(build("L3scal"), inner), y * y)
    ok = out.trunc >= 2 * order and out.truncate(2 * order).is_zero()
    return ok, f"L3scal (x D^2 + 2 D - x) kills y^2 below x^{order}"


def check_bessel_cube(order: int = 36):
    """The transport for the cube is not tabulated; it is found as the unique
    W of order <= 3 with degree <= 2 coefficients such that L4scal W kills y^3."""
    from .diffops import transport_search
    y = bessel_i0_series(order + 14)
    found = transport_search(build("L4scal"), y ** 3, 3, 2, order)
    if len(found) != 1:
        return False, f"{len(found)} candidate transports"
    return True, f"unique W = {found[0].monic()}"


def scaling_checks() -> List[Check]:
    out: List[Check] = [("scale/L2", check_scale_L2), ("scale/bessel-square", check_bessel_square),
                        ("scale/bessel-cube", check_bessel_cube)]
    for j in range(1, 5):
        out.append((f"scale/F{j}", partial(check_scale_F, j)))
    return out


# ---------------------------------------------------------------- algebraic

def check_special_op(op_id: str, order: int = 51):
    from .algebraic import special_op_check
    return special_op_check(op_id, order), f"annihilates the recursion below t^{order}"


def check_curve(curve_id: str, order: int = 41):
    from .algebraic import curve_residual
    if curve_id == "curve16":
        s = solve_regime("low", 0, fmpq(1, 2), order).corr
        src = {8: s ** 8}
    else:
        s = solve_regime("low", 0, fmpq(1, 4), order).corr
        src = s
    res = curve_residual(curve_id, src, order)
    return res.is_zero(), f"residual O(t^{order})"


def check_closed_form(which: str, order: int = 51):
    from .algebraic import CLOSED_FORMS, closed_form_series
    mu, N = CLOSED_FORMS[which]
    ok = closed_form_series(which, order).agrees(solve_regime("low", N, mu, order).corr, 2 * order)
    return ok, f"closed form vs recursion at mu={rat_str(mu)}, N={N}"


def check_theta(order: int = 26):
    from .algebraic import theta_ratio_check
    return theta_ratio_check(order), f"theta3 ratio vs symbolic-mu recursion below t^{order}"


def algebraic_checks() -> List[Check]:
    out: List[Check] = []
    for op_id in ("L14_0", "L14_1", "L14_2", "L13_0"):
        out.append((f"special-op/{op_id}", partial(check_special_op, op_id)))
    out.append(("curve/curve16", partial(check_curve, "curve16")))
    out.append(("curve/curve13", partial(check_curve, "curve13")))
    for w in ("c1", "c2", "c3"):
        out.append((f"closed-form/{w}", partial(check_closed_form, w)))
    out.append(("theta-ratio", check_theta))
    return out


# ---------------------------------------------------------------- quadrature

def check_quad_f1(N: int):
    from .quadrature import ff_t_integral
    v = ff_t_integral(1, N, 0.5).value
    s, _ = f1_series(N, 120).evaluate_numeric(0.5)
    err = abs(v - s)
    return err < 1e-10, f"|diff| = {err:.2e}"


def check_quad_f2():
    from .quadrature import ff_t_integral
    K, E = elliptic_numeric("K", 0.5), elliptic_numeric("E", 0.5)
    err = abs(ff_t_integral(2, 0, 0.5).value - K * (K - E) / 2)
    return err < 1e-8, f"|diff| = {err:.2e}"


def check_quad_mc(j: int, seed: int, samples: int = 10 ** 6):
    from .quadrature import ff_t_integral, mc_f4
    t0 = 0.25
    if j == 3:
        ref, _ = ek_to_series(ek_table(3, 0), 90).evaluate_numeric(t0)
        r = ff_t_integral(3, 0, t0, samples=samples, seed=seed)
    else:
        ref, _ = formfactor_series(4, 0, 90).evaluate_numeric(t0)
        r = mc_f4(0, t0, samples, seed)
    z = abs(r.value - ref) / r.error
    return z < 3, f"value {r.value:.10g}, reference {ref:.10g}, {z:.2f} stderr (seed {seed})"


def check_quad_phi(j: int, s0: float):
    from .quadrature import ff_phi_integral, ff_t_integral, phi_regime_t
    N = j - 1
    a = ff_phi_integral(j, N, N, s0).value
    b = ff_t_integral(j, N, phi_regime_t(j, s0)).value
    return abs(a - b) < 1e-6, f"phi form {a:.12g}, t form {b:.12g}"


def quadrature_checks(seed: int = 0) -> List[Check]:
    out: List[Check] = [(f"quad/f1/N{N}", partial(check_quad_f1, N)) for N in range(4)]
    out.append(("quad/f2/agm", check_quad_f2))
    out.append(("quad/f3/monte-carlo", partial(check_quad_mc, 3, seed)))
    out.append(("quad/f4/monte-carlo", partial(check_quad_mc, 4, seed)))
    for s0 in (0.5, 0.7, 0.8):
        out.append((f"quad/phi/f1/s{s0}", partial(check_quad_phi, 1, s0)))
    for s0 in (1.3, 1.6, 2.0):
        out.append((f"quad/phi/f2/s{s0}", partial(check_quad_phi, 2, s0)))
    return out


# ---------------------------------------------------------------- driver

def suite_checks(suite: str, max_n: int = 4, max_N: int = 3, seed: int = 0) -> List[Check]:
    if suite == "all":
        return [c for s in SUITES for c in suite_checks(s, max_n, max_N, seed)]
    if suite == "painleve":
        return painleve_checks(max_N)
    if suite == "operators":
        return operators_checks(max_N, 2 * max_n + 1)
    if suite == "russian-doll":
        return russian_doll_checks(max_n, max_N)
    if suite == "direct-sum":
        return direct_sum_checks()
    if suite == "scaling":
        return scaling_checks()
    if suite == "algebraic":
        return algebraic_checks()
    if suite == "quadrature":
        return quadrature_checks(seed)
    raise ValueError(f"unknown suite '{suite}'")


def _run_one(fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, reported with its reason
        return "error", f"{type(exc).__name__}: {exc}"
    return ("pass" if ok else "fail"), detail


def run_checks(checks: List[Check], jobs: int = 1) -> List[dict]:
    names = [n for n, _ in checks]
    fns = [f for _, f in checks]
    if jobs > 1 and len(fns) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_one, fns))
    else:
        results = [_run_one(f) for f in fns]
    rows = [{"name": n, "status": s, "detail": d} for n, (s, d) in zip(names, results)]
    return sorted(rows, key=lambda r: r["name"])
