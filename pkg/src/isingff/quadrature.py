"""Floating-point evaluation of the multiple-integral representations.

The t-form integrals over [0,1]^j put the endpoint powers x^b (1-x)^a into
Gauss-Jacobi weights (j = 1, 2) or into Beta proposal densities for Monte
Carlo (j = 3, 4). The phi-form integrals over [-pi, pi]^j are smooth and
periodic, so the trapezoidal rule converges geometrically.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.special import roots_jacobi

MAX_NODES = 2 ** 13
_CHUNK = 1 << 18


class QuadratureError(ArithmeticError):
    pass


class NoConvergence(QuadratureError):
    pass


class DomainError(QuadratureError, ValueError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    nodes_or_samples: int
    method: str
    seed: Optional[int] = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["stderr"] = d.pop("error")
        return d


# ---------------------------------------------------------------- Gauss-Jacobi

@lru_cache(maxsize=128)
def gauss_jacobi01(n: int, a: float, b: float):
    """Nodes and weights for int_0^1 (1-x)^a x^b g(x) dx."""
    y, w = roots_jacobi(n, a, b)
    x = 0.5 * (1.0 + y)
    return x, w * 2.0 ** (-a - b - 1.0)


def _check_t(t0: float):
    if not 0.0 < t0 < 1.0:
        raise DomainError(f"t0 = {t0} must lie in (0, 1)")


def _refine(rule, tol: float, start: int = 8) -> QuadResult:
    n = start
    prev = rule(n)
    while True:
        n *= 2
        if n > MAX_NODES:
            raise NoConvergence(f"no agreement to {tol} with {MAX_NODES} nodes per axis")
        cur = rule(n)
        if abs(cur - prev) < tol:
            return QuadResult(cur, abs(cur - prev), n, "gauss-jacobi")
        prev = cur


def _f1_rule(N: int, t0: float):
    # x^(N-1/2) (1-x)^(-1/2) in the weight, (1 - x t)^(-1/2) left over
    def rule(n):
        x, w = gauss_jacobi01(n, -0.5, N - 0.5)
        return t0 ** (N / 2) / math.pi * float(np.sum(w / np.sqrt(1.0 - x * t0)))
    return rule


def _f2_rule(N: int, t0: float):
    def rule(n):
        x1, w1 = gauss_jacobi01(n, -0.5, N + 0.5)
        x2, w2 = gauss_jacobi01(n, 0.5, N - 0.5)
        X1, X2 = x1[:, None], x2[None, :]
        g = np.sqrt((1.0 - t0 * X2) / (1.0 - t0 * X1)) / (1.0 - t0 * X1 * X2) ** 2
        return t0 ** (N + 1) / math.pi ** 2 * float(w1 @ g @ w2)
    return rule


def _mc(sampler, samples: int, seed: int) -> QuadResult:
    rng = np.random.default_rng(seed)
    total = 0.0
    total2 = 0.0
    left = samples
    while left > 0:
        m = min(left, _CHUNK)
        g = sampler(rng, m)
        total += float(np.sum(g))
        total2 += float(np.sum(g * g))
        left -= m
    mean = total / samples
    var = max(total2 / samples - mean * mean, 0.0)
    return QuadResult(mean, math.sqrt(var / samples), samples, "monte-carlo", seed)


def _f3_sampler(N: int, t0: float):
    # x1, x3 ~ Beta(1/2,1/2) and x2 ~ Beta(3/2,3/2) absorb the endpoint powers;
    # the normalizations pi, pi, pi/8 against 1/(pi^3 1! 2!) leave 1/16
    pref = t0 ** (1.5 * N + 2) / 16.0

    def sample(rng, m):
        x1 = rng.beta(0.5, 0.5, m)
        x3 = rng.beta(0.5, 0.5, m)
        x2 = rng.beta(1.5, 1.5, m)
        g = (x1 * x2 * x3) ** N * np.sqrt((1 - t0 * x2) / ((1 - t0 * x1) * (1 - t0 * x3)))
        g = g / ((1 - t0 * x1 * x2) * (1 - t0 * x3 * x2)) ** 2 * (x1 - x3) ** 2
        return pref * g
    return sample


def ff_t_integral(j: int, N: int, t0: float, tol: float = 1e-12, samples: int = 10 ** 6,
                  seed: int = 0) -> QuadResult:
    """f^(j)_{N,N}(t0) from its integral over [0,1]^j; j = 1, 2 are
    deterministic, j = 3 is a seeded Monte Carlo estimate with stderr."""
    t0 = float(t0)
    _check_t(t0)
    if N < 0:
        raise DomainError("N must be nonnegative")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if j == 1:
        return _refine(_f1_rule(N, t0), tol)
    if j == 2:
        return _refine(_f2_rule(N, t0), tol)
    if j == 3:
        return _mc(_f3_sampler(N, t0), samples, seed)
    raise DomainError("j must be 1, 2 or 3")


def mc_f4(N: int, t0: float, samples: int = 10 ** 6, seed: int = 0) -> QuadResult:
    """Monte Carlo estimate of f^(4)_{N,N}(t0).

    Odd variables carry x^(1/2)(1-x)^(-1/2), even ones x^(-1/2)(1-x)^(1/2);
    drawing them from Beta(3/2,1/2) and Beta(1/2,3/2) absorbs these exactly
    (each normalization is pi/2), leaving a bounded integrand.
    """
    t0 = float(t0)
    _check_t(t0)
    if samples < 10 ** 5:
        raise DomainError("use at least 1e5 samples")
    pref = t0 ** (2 * N + 4) / 64.0

    def sample(rng, m):
        x1, x3 = rng.beta(1.5, 0.5, m), rng.beta(1.5, 0.5, m)
        x2, x4 = rng.beta(0.5, 1.5, m), rng.beta(0.5, 1.5, m)
        g = (x1 * x2 * x3 * x4) ** N
        g = g * np.sqrt((1 - t0 * x2) * (1 - t0 * x4) / ((1 - t0 * x1) * (1 - t0 * x3)))
        for xo in (x1, x3):
            for xe in (x2, x4):
                g = g / (1 - t0 * xo * xe) ** 2
        return pref * g * (x1 - x3) ** 2 * (x2 - x4) ** 2
    return _mc(sample, samples, seed)


# ---------------------------------------------------------------- phi form

def _x_and_sinh(s: float, phi: np.ndarray):
    a = s + 1.0 / s - np.cos(phi)
    sh = np.sqrt(a * a - 1.0)
    return a - sh, sh


def _chat(j: int, M: int, N: int, s: float, n: int) -> float:
    phi = -math.pi + 2.0 * math.pi * np.arange(n) / n
    x, sh = _x_and_sinh(s, phi)
    if j == 1:
        return float(np.mean(x ** M * np.cos(N * phi) / sh))
    X1, X2 = x[:, None], x[None, :]
    P1, P2 = phi[:, None], phi[None, :]
    h = 2.0 * np.sqrt(X1 * X2) * np.sin((P1 - P2) / 2.0) / (1.0 - X1 * X2)
    g = h * h * (X1 * X2) ** M * np.cos(N * (P1 + P2)) / (sh[:, None] * sh[None, :])
    return float(np.mean(g)) / 2.0


def phi_regime_t(j: int, s0: float) -> float:
    """The t belonging to s0: s0^4 above T_c (odd j), s0^-4 below (even j)."""
    return s0 ** 4 if j % 2 else s0 ** -4


def ff_phi_integral(j: int, M: int, N: int, s0: float, tol: float = 1e-12,
                    normalize: bool = True) -> QuadResult:
    """C-hat^j(M,N) by the periodic trapezoidal rule, divided by s for odd j
    unless normalize=False (which gives the bare h_j normalization)."""
    s0 = float(s0)
    if j not in (1, 2):
        raise DomainError("j must be 1 or 2")
    if s0 <= 0 or s0 == 1.0:
        raise DomainError("s0 must be positive and different from 1")
    if (j % 2 == 1) != (s0 < 1.0):
        raise DomainError("odd j lives above T_c (s0 < 1), even j below (s0 > 1)")
    if tol <= 0:
        raise DomainError("tol must be positive")
    n = 16
    prev = _chat(j, M, N, s0, n)
    while True:
        n *= 2
        if n > MAX_NODES:
            raise NoConvergence(f"trapezoid rule did not settle to {tol}")
        cur = _chat(j, M, N, s0, n)
        if abs(cur - prev) < tol:
            break
        prev = cur
    scale = 1.0 / s0 if (normalize and j % 2) else 1.0
    return QuadResult(cur * scale, abs(cur - prev) * scale, n, "trapezoid")
