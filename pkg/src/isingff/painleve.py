"""Sigma form of Painleve VI: residuals, order-by-order series solutions in
both temperature regimes, extraction of the lambda^2 coefficients, and the
formal covariance checks.

The residual polynomial is

    R = (t(t-1) s'')^2 - N^2 ((t-1) s' - s)^2 + 4 s' ((t-1) s' - s - 1/4)(t s' - s).

Below T_c the correlation is C_- = (1-t)^(1/4) g with s = t(t-1) g'/g; above
T_c it is C_+ = (1-t)^(1/4) h with s = t(t-1) h'/h + (t-1)/4. Both recursions
run with mu = lambda^2 kept symbolic; a numeric mu is substituted at the end.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from flint import fmpq, fmpq_poly

from .algebra import BiPoly, BiRat, bipoly_substitute, rat
from .series import HalfSeries, SeriesError, geometric_series, t_series
from .special import f1_series, factorial, one_minus_t_power, pochhammer


class PainleveError(ArithmeticError):
    pass


class DegeneracyViolation(PainleveError):
    """A linear constraint was singular where it should not be, or regular
    where the recursion expects a free parameter."""


class OrderTooLowToExtract(PainleveError):
    pass


class NotCovariant(PainleveError):
    pass


# ---------------------------------------------------------------- residuals

def _poly_series(cs, trunc):
    return HalfSeries(cs, base=0, step=2, trunc=trunc)


def sigma_residual(sigma: HalfSeries, N) -> HalfSeries:
    """Residual of the sigma form evaluated on a truncated series."""
    N2 = rat(N) ** 2
    big = sigma.trunc + 8
    t = _poly_series([0, 1], big)
    tm1 = _poly_series([-1, 1], big)
    d1 = sigma.derivative()
    d2 = d1.derivative()
    A = t * tm1 * d2
    B = tm1 * d1 - sigma
    C = t * d1 - sigma
    return A * A - (B * B).scale(N2) + (d1 * (B - fmpq(1, 4)) * C).scale(4)


def riccati_residual(sigma: HalfSeries, N) -> HalfSeries:
    """16 t(t-1) s' + 16 s^2 - 8 (t-1) s - (2N-1)(2N+1)(t-1)^2."""
    N = rat(N)
    big = sigma.trunc + 8
    t = _poly_series([0, 1], big)
    tm1 = _poly_series([-1, 1], big)
    k = (2 * N - 1) * (2 * N + 1)
    return ((t * tm1 * sigma.derivative()).scale(16) + (sigma * sigma).scale(16)
            - (tm1 * sigma).scale(8) - (tm1 * tm1).scale(k))


@dataclass(frozen=True)
class SigmaSeries:
    sigma: HalfSeries
    regime: str
    N: Optional[int] = None


def sigma_from_corr(C: HalfSeries, regime: str, N: Optional[int] = None) -> SigmaSeries:
    """t(t-1) d log C/dt minus t/4 (low) or 1/4 (high)."""
    if regime not in ("low", "high"):
        raise ValueError("regime must be 'low' or 'high'")
    big = C.trunc + 8
    t = _poly_series([0, 1], big)
    tm1 = _poly_series([-1, 1], big)
    s = t * tm1 * C.log_derivative()
    s = s - (t.scale(fmpq(1, 4)) if regime == "low" else fmpq(1, 4))
    return SigmaSeries(s, regime, N)


# ---------------------------------------------------------------- recursion

class _ResidualCoeffs:
    """Coefficients of the residual for an integer-step sigma held as a list
    over Q[mu]. Partial products are cached and invalidated when a sigma
    coefficient changes, so repeated trials at one order stay cheap."""

    def __init__(self, N2, length: int):
        self.N2 = fmpq_poly([N2])
        self.s = [fmpq_poly([])] * length
        self._Q = []

    def set(self, m: int, v: fmpq_poly):
        self.s[m] = v
        del self._Q[max(m - 1, 0):]

    def _abcs(self, k):
        s = self.s
        sk, sk1 = s[k], s[k + 1]
        return (k * (k - 1) * sk - (k + 1) * k * sk1,
                (k - 1) * sk - (k + 1) * sk1,
                (k - 1) * sk,
                (k + 1) * sk1)

    def coeff(self, j: int) -> fmpq_poly:
        rows = [self._abcs(k) for k in range(j + 1)]
        A = [r[0] for r in rows]
        B = [r[1] for r in rows]
        C = [r[2] for r in rows]
        S = [r[3] for r in rows]
        Q = self._Q
        for k in range(len(Q), j + 1):
            acc = C[k] * fmpq(-1, 4)
            for l in range(k + 1):
                if not B[l].is_zero() and not C[k - l].is_zero():
                    acc += B[l] * C[k - l]
            Q.append(acc)
        aa = fmpq_poly([])
        bb = fmpq_poly([])
        sq = fmpq_poly([])
        for i in range(j + 1):
            if not A[i].is_zero():
                aa += A[i] * A[j - i]
            if not B[i].is_zero():
                bb += B[i] * B[j - i]
            if not S[i].is_zero():
                sq += S[i] * Q[j - i]
        return aa - self.N2 * bb + 4 * sq


def _exact_div(num: fmpq_poly, den: fmpq_poly, where: str) -> fmpq_poly:
    q, r = divmod(num, den)
    if not r.is_zero():
        raise DegeneracyViolation(f"inexact division in Q[mu] at {where}")
    return q


def _solve_linear(rc: _ResidualCoeffs, m: int, j: int):
    """Coefficient a and constant R0 of the order-j equation in s_m."""
    rc.set(m, fmpq_poly([]))
    r0 = rc.coeff(j)
    rc.set(m, fmpq_poly([1]))
    r1 = rc.coeff(j)
    return r1 - r0, r0


def rho_low(N: int) -> fmpq:
    """(1/2)_N (3/2)_N / (4 ((N+1)!)^2)."""
    return pochhammer(fmpq(1, 2), N) * pochhammer(fmpq(3, 2), N) / (4 * factorial(N + 1) ** 2)


def rho_high(N: int) -> fmpq:
    """(1/2)_N ((3/2)_N)^2 / (16 Gamma(N+2) Gamma(N+3)^2)."""
    return (pochhammer(fmpq(1, 2), N) * pochhammer(fmpq(3, 2), N) ** 2
            / (16 * factorial(N + 1) * factorial(N + 2) ** 2))


def _low_sigma(N: int, L: int) -> list:
    """sigma coefficients s_0..s_{L-1} below T_c over Q[mu]."""
    jmax = L + N + 1
    rc = _ResidualCoeffs(fmpq(N * N), jmax + 3)
    mu = fmpq_poly([0, 1])
    free = -(N + 1) * rho_low(N) * mu
    # s_m = 0 for m <= N: the order 2m-2 equation is a nondegenerate square
    for m in range(1, N + 1):
        rc.set(m, fmpq_poly([1]))
        if rc.coeff(2 * m - 2).is_zero():
            raise DegeneracyViolation(f"order {2 * m - 2} constraint degenerate for s_{m}")
        rc.set(m, fmpq_poly([]))
    rc.set(N + 1, free)
    for j in range(0, 2 * N + 1):
        if not rc.coeff(j).is_zero():
            raise DegeneracyViolation(f"order {j} fails with the free s_{N + 1}")
    if N == 0:
        # at t^2 the equation 4 s2^2 - 4 s1 (s1 + 1/4) s2 = 0 is quadratic;
        # the zero root would leave every later linear coefficient zero
        s1 = rc.s[1]
        s2 = s1 * (s1 + fmpq(1, 4))
        if L > 2:
            rc.set(2, s2)
            if not rc.coeff(2).is_zero():
                raise DegeneracyViolation("order-2 root check failed")
        start = 3
        offset = 0
    else:
        start = N + 2
        offset = N - 1
    for m in range(start, L):
        j = m + offset
        a, r0 = _solve_linear(rc, m, j)
        if a.is_zero():
            raise DegeneracyViolation(f"vanishing coefficient for s_{m} at order {j}")
        rc.set(m, _exact_div(-r0, a, f"s_{m}"))
        if not rc.coeff(j).is_zero():
            raise DegeneracyViolation(f"order {j} not solved")
    return rc.s[:L]


def _high_sigma(N: int, L: int):
    """sigma = sigma0 + delta above T_c; returns (sigma list, delta list)."""
    jmax = L + 1
    f1 = f1_series(N, N // 2 + jmax + 4)
    # sigma0 = t(t-1) f1'/f1 + (t-1)/4, an integer-step series
    s0 = sigma_from_corr((f1 * one_minus_t_power(fmpq(1, 4), f1.trunc // 2)), "high").sigma
    s0 = s0.regrid(0, 2)
    base = [fmpq_poly([c]) for c in s0.coeffs]
    n = jmax + 3
    if len(base) < n:
        raise PainleveError("internal: sigma0 too short")
    rc = _ResidualCoeffs(fmpq(N * N), n)
    for k in range(n):
        rc.set(k, base[k])
    mu = fmpq_poly([0, 1])
    ell = pochhammer(fmpq(1, 2), N) / factorial(N)
    free = -(N + 2) * rho_high(N) / ell * mu
    delta = [fmpq_poly([])] * L
    # delta_0 = 0: a constant term would make h logarithmic at t = 0
    for m in range(1, L):
        a, r0 = _solve_shift(rc, base[m], m)
        if m == N + 2:
            if not a.is_zero() or not r0.is_zero():
                raise DegeneracyViolation(f"order {m} should be free")
            d = free
        else:
            if a.is_zero():
                raise DegeneracyViolation(f"vanishing coefficient for delta_{m}")
            d = _exact_div(-r0, a, f"delta_{m}")
            if m <= N + 1 and not d.is_zero():
                raise DegeneracyViolation(f"delta_{m} should vanish")
        delta[m] = d
        rc.set(m, base[m] + d)
        if not rc.coeff(m).is_zero():
            raise DegeneracyViolation(f"order {m} not solved")
    return rc.s[:L], delta


def _solve_shift(rc: _ResidualCoeffs, b: fmpq_poly, m: int):
    """Linear coefficient and constant for s_m = b + delta at order m."""
    rc.set(m, b)
    r0 = rc.coeff(m)
    rc.set(m, b + 1)
    r1 = rc.coeff(m)
    return r1 - r0, r0


@dataclass
class RecursionResult:
    corr: HalfSeries          # C_-(N,N;lambda) or C_+(N,N;lambda) without the lambda prefactor
    free_index: int
    rho: fmpq
    regime: str
    N: int
    bracket: HalfSeries       # C/(1-t)^(1/4): g below T_c, h above
    sigma: HalfSeries
    mu: Optional[fmpq] = None  # None when mu is symbolic

    def to_json(self) -> dict:
        from .algebra import rat_str

        return {"N": self.N, "regime": self.regime, "free_index": self.free_index,
                "rho": rat_str(self.rho),
                "mu": "sym" if self.mu is None else rat_str(self.mu),
                "series": self.corr.to_json()}


_CACHE: dict = {}


def _check_residual(sig: HalfSeries, N: int):
    res = sigma_residual(sig, N)
    if not res.is_zero():
        raise DegeneracyViolation(f"residual nonzero at t^({res.valuation()}/2)")


def _solve_symbolic(regime: str, N: int, order: int) -> RecursionResult:
    key = (regime, N)
    hit = _CACHE.get(key)
    if hit is not None and hit.corr.trunc >= 2 * order:
        return hit
    if regime == "low":
        L = order
        s = _low_sigma(N, L)
        sig = HalfSeries(s, base=0, step=2, trunc=2 * L, mu=True)
        _check_residual(sig, N)
        # g = exp(int sigma / (t(t-1)))
        integrand = -(sig.shift(-2) * geometric_series(L).with_mu())
        g = integrand.integrate().exp().truncate(2 * order)
        corr = (one_minus_t_power(fmpq(1, 4), order).with_mu() * g).truncate(2 * order)
        res = RecursionResult(corr, N + 1, rho_low(N), "low", N, g, sig)
    elif regime == "high":
        L = order - N // 2
        s, delta = _high_sigma(N, L)
        sig = HalfSeries(s, base=0, step=2, trunc=2 * L, mu=True)
        _check_residual(sig, N)
        dl = HalfSeries(delta, base=0, step=2, trunc=2 * L, mu=True)
        integrand = -(dl.shift(-2) * geometric_series(L).with_mu())
        e = integrand.integrate().exp()
        h = (f1_series(N, order + 1).with_mu() * e).truncate(2 * order)
        corr = (one_minus_t_power(fmpq(1, 4), order + 1).with_mu() * h).truncate(2 * order)
        res = RecursionResult(corr, N + 2, rho_high(N), "high", N, h, sig)
    else:
        raise ValueError("regime must be 'low' or 'high'")
    _CACHE[key] = res
    return res


def _truncated(r: RecursionResult, order: int) -> RecursionResult:
    tr = 2 * order
    return RecursionResult(r.corr.truncate(tr), r.free_index, r.rho, r.regime, r.N,
                           r.bracket.truncate(tr), r.sigma.truncate(min(r.sigma.trunc, tr)), r.mu)


def solve_regime(regime: str, N: int, mu: Union[None, str, int, fmpq] = None,
                 order: int = 20) -> RecursionResult:
    """Series solution of the sigma form for C_-(N,N;lambda) (regime 'low')
    or C_+(N,N;lambda) (regime 'high'), known below t^order.

    ``mu`` is lambda^2; ``None`` or ``"sym"`` keeps it symbolic.
    """
    if isinstance(N, bool) or not isinstance(N, int):
        q = rat(N)
        if q.q != 1:
            raise ValueError("only integer N is supported")
        N = int(q.p)
    if N < 0:
        raise ValueError("N must be nonnegative")
    if order <= N + 2:
        raise ValueError("order must exceed N + 2")
    r = _truncated(_solve_symbolic(regime, N, order), order)
    if mu is None or mu == "sym":
        return r
    m = rat(mu)
    return RecursionResult(r.corr.subs_mu(m), r.free_index, r.rho, r.regime, r.N,
                           r.bracket.subs_mu(m), r.sigma.subs_mu(m), m)


def expected_leading_exponent(regime: str, N: int, n: int) -> int:
    """Leading exponent (in halves) of the mu^n coefficient."""
    if regime == "low":
        return 2 * n * (N + n)
    return (2 * n + 1) * N + 2 * n * (n + 1)


def lambda_coefficient(r: RecursionResult, n: int) -> HalfSeries:
    """Coefficient of mu^n in C/(1-t)^(1/4): f^(2n) below T_c (n >= 1) and
    f^(2n+1) above."""
    if r.mu is not None:
        raise ValueError("lambda_coefficient needs a symbolic-mu result")
    e = expected_leading_exponent(r.regime, r.N, n)
    if r.bracket.trunc <= e:
        raise OrderTooLowToExtract(f"series known below t^({r.bracket.trunc}/2), need t^({e}/2)")
    c = r.bracket.mu_coefficient(n)
    if r.regime == "low" and n == 0:
        return c
    v = c.valuation()
    if v != e:
        raise PainleveError(f"mu^{n} coefficient starts at t^({v}/2), expected t^({e}/2)")
    return c.regrid(e, c.step if e % 2 == 0 else 1).normalize()


def formfactor_series(j: int, N: int, order: int) -> HalfSeries:
    """f^(j)_{N,N} below t^order from the recursion (j >= 1)."""
    if j < 1:
        raise ValueError("j must be at least 1")
    regime = "low" if j % 2 == 0 else "high"
    n = j // 2
    r = solve_regime(regime, N, None, max(order, N + 3))
    return lambda_coefficient(r, n).truncate(2 * order)


# ---------------------------------------------------------------- covariance

def _residual_poly(names=("t", "s", "s1", "s2", "n2")):
    t, s, s1, s2, n2 = BiPoly.gens(names)
    A = t * (t - 1) * s2
    B = (t - 1) * s1 - s
    C = t * s1 - s
    return A * A - n2 * B * B + 4 * s1 * (B - fmpq(1, 4)) * C, (t, s, s1, s2, n2)


def covariance_residual_check(which: str) -> BiRat:
    """Substitute a symmetry map into the residual polynomial and return the
    rational factor relating the result to the original residual."""
    R, (t, s, s1, s2, n2) = _residual_poly()
    one = BiPoly.const(R.ctx, 1)
    if which == "identity":
        maps = {}
    elif which == "kramers":
        # (t, s, s', s'') -> (1/t, s/t, s - t s', t^3 s'')
        maps = {"t": (one, t), "s": (s, t), "s1": s - t * s1, "s2": t * t * t * s2}
    elif which == "mirror":
        # (t, s, s', s'') -> (1-t, -s-1/4, s', -s''), N = 0
        maps = {"t": 1 - t, "s": -s - fmpq(1, 4), "s1": s1, "s2": -s2, "n2": BiPoly.const(R.ctx, 0)}
        R = bipoly_substitute(R, {"n2": BiPoly.const(R.ctx, 0)})
    else:
        raise ValueError(f"unknown map {which!r}")
    img = bipoly_substitute(R, maps)
    if isinstance(img, BiRat):
        num, den = img.num, img.den
    else:
        num, den = img, one
    q, r = num.divmod(R)
    if not r.is_zero():
        raise NotCovariant(f"{which}: image is not a multiple of the residual")
    return BiRat(q, den)
