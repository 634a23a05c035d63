"""Hypergeometric and elliptic special functions.

K and E use the hypergeometric normalization
K(t) = 2F1(1/2, 1/2; 1; t) and E(t) = 2F1(1/2, -1/2; 1; t), i.e. 2/pi times
the classical complete integrals with modulus squared equal to t.
"""
from __future__ import annotations

import math
from functools import lru_cache

from flint import fmpq, fmpq_poly

from .algebra import rat
from .series import HalfSeries, binomial_series


class SpecialError(ArithmeticError):
    pass


class BadParameterC(SpecialError, ValueError):
    pass


class DomainError(SpecialError, ValueError):
    pass


def pochhammer(a, n: int) -> fmpq:
    """Rising factorial (a)_n; (a)_0 = 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a = rat(a)
    out = fmpq(1)
    for k in range(n):
        out *= a + k
    return out


def factorial(n: int) -> fmpq:
    return fmpq(math.factorial(n))


def hyp2f1_coeffs(a, b, c, n: int) -> list:
    a, b, c = rat(a), rat(b), rat(c)
    if c.q == 1 and c <= 0:
        raise BadParameterC(f"c = {c} is a non-positive integer")
    out = [fmpq(1)]
    term = fmpq(1)
    for k in range(n - 1):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1))
        out.append(term)
    return out[:n]


def hyp2f1_series(a, b, c, order: int) -> HalfSeries:
    """2F1(a, b; c; t) through t^(order-1)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return HalfSeries(hyp2f1_coeffs(a, b, c, order), base=0, step=2, trunc=2 * order)


@lru_cache(maxsize=32)
def K_series(order: int) -> HalfSeries:
    return hyp2f1_series(fmpq(1, 2), fmpq(1, 2), 1, order)


@lru_cache(maxsize=32)
def E_series(order: int) -> HalfSeries:
    return hyp2f1_series(fmpq(1, 2), fmpq(-1, 2), 1, order)


def f1_series(N: int, order: int) -> HalfSeries:
    """One-particle form factor t^(N/2) (1/2)_N/N! 2F1(1/2, N+1/2; N+1; t),
    known below t^order."""
    lead = pochhammer(fmpq(1, 2), N) / factorial(N)
    n = max(0, -((N - 2 * order) // 2))  # integer steps below the bound
    cs = [c * lead for c in hyp2f1_coeffs(fmpq(1, 2), N + fmpq(1, 2), N + 1, max(n, 1))][:n]
    return HalfSeries(cs, base=N, step=2, trunc=2 * order)


# ---------------------------------------------------------------- numerics

_AGM_RTOL = 4.5e-16  # two ulps; a strict 1e-16 test can stall one bit apart


def elliptic_numeric(kind: str, t0: float) -> float:
    """AGM evaluation of K or E (hypergeometric normalization) for 0 <= t0 < 1."""
    t0 = float(t0)
    if not (0.0 <= t0 < 1.0):
        raise DomainError(f"t0 = {t0} outside [0, 1)")
    if kind not in ("K", "E"):
        raise ValueError("kind must be 'K' or 'E'")
    a, b = 1.0, math.sqrt(1.0 - t0)
    # E/K = 1 - sum_{n>=0} 2^(n-1) c_n^2 with c_0^2 = t0
    csum = 0.5 * t0
    p = 0.5
    for _ in range(64):
        if abs(a - b) <= _AGM_RTOL * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        p *= 2.0
        csum += p * c * c
    K = 1.0 / a
    if kind == "K":
        return K
    return K * (1.0 - csum)


# ---------------------------------------------------------------- nome, theta

def chebyshev_T(n: int) -> fmpq_poly:
    """T_n by the three-term recurrence."""
    x = fmpq_poly([0, 1])
    a, b = fmpq_poly([1]), x
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, 2 * x * b - a
    return b


def chebyshev_T_even_in_mu(k: int) -> fmpq_poly:
    """T_{2k}(lambda) written as a polynomial in mu = lambda^2, i.e. T_k(2mu-1)."""
    from .algebra import poly_compose

    return poly_compose(chebyshev_T(k), fmpq_poly([-1, 2]))


def _modulus_from_nome(order: int) -> HalfSeries:
    """m(q) = 16 q prod_n ((1+q^{2n}) / (1+q^{2n-1}))^8 through q^(order-1)."""
    tr = 2 * order
    prod = HalfSeries.one(tr)
    for n in range(1, order):
        num = HalfSeries.one(tr) + HalfSeries.monomial(1, 4 * n, tr)
        den = HalfSeries.one(tr) + HalfSeries.monomial(1, 2 * (2 * n - 1), tr)
        prod = prod * num * den.inverse()
    prod = prod ** 8
    return prod.shift(2).scale(16).truncate(tr)


@lru_cache(maxsize=8)
def nome_series(order: int) -> HalfSeries:
    """Elliptic nome q as a series in t = k^2, through t^(order-1)."""
    if order < 2:
        raise ValueError("order must be at least 2")
    return _modulus_from_nome(order).revert().truncate(2 * order)


def theta3_ratio_series(order: int) -> HalfSeries:
    """theta3(u, q)/theta3(0, q) with lambda = cos u, as a lambda series in t."""
    q = nome_series(order)
    tr = 2 * order
    num = HalfSeries.one(tr, mu=True)
    den = HalfSeries.one(tr)
    k = 1
    while k * k < order:
        qk = q ** (k * k)
        num = num + qk.scale(chebyshev_T_even_in_mu(k) * 2)
        den = den + qk.scale(2)
        k += 1
    return (num * den.inverse()).truncate(tr)


def theta4_over_theta3_series(order: int) -> HalfSeries:
    """theta4(q)/theta3(q) in t; used for the lambda = 0 slice check."""
    q = nome_series(order)
    tr = 2 * order
    num = HalfSeries.one(tr)
    den = HalfSeries.one(tr)
    k = 1
    while k * k < order:
        qk = q ** (k * k)
        num = num + qk.scale(2 * (-1) ** k)
        den = den + qk.scale(2)
        k += 1
    return (num * den.inverse()).truncate(tr)


def one_minus_t_power(p, order: int) -> HalfSeries:
    return binomial_series(p, order, sign=-1)
