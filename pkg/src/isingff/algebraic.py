"""Special values lambda = cos(pi m/n): closed algebraic forms of the
correlation, the modular-curve relations they satisfy, the Fuchsian
operators annihilating them and the theta-function resummation at N = 0.

With u = (1-t)^(1/2), the printed radical 2^(-k/4) cancels against
(1+u)^(k/4) at t = 0, so every closed form here is (1-t)^(1/16) times powers
of (1+u)/2 and has rational coefficients. No radical extension is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Union

from flint import fmpq, fmpq_poly

from ._data import load_json
from .diffops import apply, build
from .painleve import solve_regime
from .series import HalfSeries
from .special import one_minus_t_power, theta3_ratio_series


class PowerUnavailable(ValueError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    """P(tau, t) = sum over monomials of t_poly(t) tau^tau_pow."""
    id: str
    monomials: Mapping[int, fmpq_poly]
    genus: int

    def degree(self) -> int:
        return max(self.monomials)


@lru_cache(maxsize=1)
def _curves() -> dict:
    out = {}
    for c in load_json("curves.json")["curves"]:
        mons = {m["tau_pow"]: fmpq_poly([fmpq(*map(int, x.split("/"))) if "/" in x else int(x)
                                         for x in m["t_poly"]])
                for m in c["monomials"]}
        out[c["id"]] = CurveSpec(c["id"], mons, c["genus"])
    return out


def curve(curve_id: str) -> CurveSpec:
    try:
        return _curves()[curve_id]
    except KeyError:
        raise KeyError(f"no curve '{curve_id}' in the embedded data") from None


# lambda^2 and N for each closed form
CLOSED_FORMS = {"c1": (fmpq(1, 2), 0), "c2": (fmpq(1, 2), 1), "c3": (fmpq(1, 2), 2)}


def closed_form_series(which: str, order: int) -> HalfSeries:
    """C_-(N,N; cos(pi/4)) for N = 0, 1, 2 in closed form, below t^order."""
    if order < 2:
        raise ValueError("order must be at least 2")
    tr = 2 * order
    u = one_minus_t_power(fmpq(1, 2), order)
    half = (HalfSeries.one(tr) + u).scale(fmpq(1, 2))
    pre = one_minus_t_power(fmpq(1, 16), order)
    if which == "c1":
        return (pre * half.pow_rational(fmpq(1, 4))).truncate(tr)
    if which == "c2":
        return (pre * half.pow_rational(fmpq(3, 4))).truncate(tr)
    if which == "c3":
        five = (HalfSeries.one(tr).scale(5) - u).scale(fmpq(1, 4))
        return (pre * half.pow_rational(fmpq(5, 4)) * five).truncate(tr)
    raise ValueError("which must be one of c1, c2, c3")


def curve_residual(c: Union[CurveSpec, str], tau_source: Union[HalfSeries, Mapping[int, HalfSeries]],
                   order: int) -> HalfSeries:
    """P(tau, t) as a series below t^order.

    ``tau_source`` is either the tau series itself or a map {d: tau^d}; every
    power in the curve must then be a multiple of an available d.
    """
    if isinstance(c, str):
        c = curve(c)
    powers = {1: tau_source} if isinstance(tau_source, HalfSeries) else dict(tau_source)
    tr = 2 * order
    total = HalfSeries.zero(tr)
    for p, tp in sorted(c.monomials.items()):
        if p == 0:
            term = HalfSeries.from_poly(tp, tr)
        else:
            d = next((d for d in sorted(powers, reverse=True) if p % d == 0), None)
            if d is None:
                raise PowerUnavailable(f"tau^{p} cannot be formed from powers {sorted(powers)}")
            term = (powers[d].truncate(tr) ** (p // d)) * HalfSeries.from_poly(tp, tr)
        total = total + term.truncate(tr)
    return total


# operator id -> (N, lambda^2)
SPECIAL_OPERATORS = {
    "L14_0": (0, fmpq(1, 2)),
    "L14_1": (1, fmpq(1, 2)),
    "L14_2": (2, fmpq(1, 2)),
    "L13_0": (0, fmpq(1, 4)),
}


def special_op_check(op_id: str, order: int) -> bool:
    """Apply the operator to solve_regime(low, N, mu) and test for zero."""
    if op_id not in SPECIAL_OPERATORS:
        raise KeyError(f"unknown special operator '{op_id}'")
    N, mu = SPECIAL_OPERATORS[op_id]
    op = build(op_id)
    s = solve_regime("low", N, mu, order + op.order + op.pole_depth() + 1).corr
    out = apply(op, s)
    return out.truncate(min(out.trunc, 2 * order)).is_zero()


def theta_ratio_check(order: int) -> bool:
    """theta3(u,q)/theta3(0,q), graded in lambda^2, against the symbolic-mu
    recursion at N = 0; bit-exact below t^order."""
    if order < 10:
        raise ValueError("order must be at least 10")
    th = theta3_ratio_series(order)
    rec = solve_regime("low", 0, "sym", order).corr
    return th.agrees(rec, 2 * order)
