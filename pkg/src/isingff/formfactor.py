"""Form factors f^(j)_{N,N}: elliptic-integral closed forms, the nested
hypergeometric sum for f^(2), the exponential/form-factor regrouping and the
Toeplitz determinant below T_c."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Mapping, Optional

from flint import fmpq, fmpq_poly

from ._data import load_json
from .algebra import RatFunc, rat, rat_str
from .series import HalfSeries, SeriesError
from .special import (E_series, K_series, f1_series, factorial, hyp2f1_series,
                      pochhammer)


class NotTabulated(KeyError):
    pass


# ---------------------------------------------------------------- EK tables

@dataclass(frozen=True)
class EKPoly:
    """c t^(e_halves/2) * sum over (a, b) of r_ab(t) K^a E^b."""
    c: fmpq
    e_halves: int
    terms: Mapping[tuple, RatFunc]

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=0)

    def to_json(self) -> dict:
        return {"prefactor": {"c": rat_str(self.c), "e_halves": self.e_halves},
                "terms": [{"K": a, "E": b, **_rf_json(r)} for (a, b), r in sorted(self.terms.items())]}


def _rf_json(r: RatFunc) -> dict:
    d = r.to_strs()
    return {"coeff_num": d["num"], "coeff_den": d["den"]}


@lru_cache(maxsize=1)
def _ek_index() -> dict:
    out = {}
    for rec in load_json("ek_tables.json")["tables"]:
        terms = {}
        for tm in rec["terms"]:
            terms[(tm["K"], tm["E"])] = RatFunc.from_strs(tm["coeff_num"], tm["coeff_den"])
        pf = rec["prefactor"]
        out[(rec["j"], rec["N"])] = EKPoly(rat(pf["c"]), int(pf["e_halves"]), terms)
    return out


def _erratum_3_3(p: EKPoly) -> EKPoly:
    # one factor of t sits on the E^3 term in print; it belongs to the K term
    terms = dict(p.terms)
    terms[(1, 0)] = terms[(1, 0)] * RatFunc(fmpq_poly([0, 1]))
    terms[(0, 3)] = terms[(0, 3)] / RatFunc(fmpq_poly([0, 1]))
    return EKPoly(p.c, p.e_halves, terms)


def _erratum_8_1(p: EKPoly) -> EKPoly:
    # the printed normalization is 16 * 8!; every other N = 1 entry uses j!
    return EKPoly(p.c * 16, p.e_halves, p.terms)


ERRATA = {(3, 3): _erratum_3_3, (8, 1): _erratum_8_1}


def ek_tabulated() -> list:
    return sorted(_ek_index())


def ek_table(j: int, N: int, printed: bool = False) -> EKPoly:
    """Closed form of f^(j)_{N,N}; corrections in ERRATA are applied unless
    the literal transcription is requested with printed=True."""
    try:
        p = _ek_index()[(j, N)]
    except KeyError:
        raise NotTabulated(f"f^({j})_{{{N},{N}}} has no closed form in the embedded table") from None
    if not printed and (j, N) in ERRATA:
        p = ERRATA[(j, N)](p)
    return p


def ratfunc_series(r: RatFunc, order: int) -> HalfSeries:
    """Expansion of a rational function at t = 0 below t^order."""
    if r.is_zero():
        return HalfSeries.zero(2 * order)
    v, _ = r.laurent(1)
    n = max(order - v, 0)
    v, cs = r.laurent(n)
    return HalfSeries(cs, base=2 * v, step=2, trunc=2 * order)


def ek_to_series(p: EKPoly, order: int) -> HalfSeries:
    """Substitute the K and E series; result known below t^order."""
    inner = (2 * order - p.e_halves + 1) // 2
    K = K_series(inner)
    E = E_series(inner)
    kp = [HalfSeries.one(2 * inner)]
    ep = [HalfSeries.one(2 * inner)]
    deg = p.degree()
    for _ in range(deg):
        kp.append(kp[-1] * K)
        ep.append(ep[-1] * E)
    total = HalfSeries.zero(2 * inner)
    for (a, b), r in p.terms.items():
        total = total + ratfunc_series(r, inner) * kp[a] * ep[b]
    out = total.scale(p.c).shift(p.e_halves)
    for e, c in out.items():
        if e < 0 and c != 0:
            raise SeriesError("closed form has a negative power of t; table entry inconsistent")
    v = out.valuation()
    if v is None:
        return HalfSeries.zero(2 * order)
    return out.normalize().truncate(2 * order)


# ---------------------------------------------------------------- nested sum

def f2_nested_series(N: int, order: int) -> HalfSeries:
    """f^(2)_{N,N} from the expansion of (1 - t x1 x2)^(-2) in the double
    integral: t^(N+1) sum_j (j+1) t^j c_{N+j} F(-1/2, N+j+1/2; N+j+2; t)
    F(1/2, N+j+3/2; N+j+2; t), with c_n = (1/2)_n (3/2)_n / (4 (n+1)!^2)."""
    if order < N + 1:
        raise ValueError("order must be at least N + 1")
    tr = 2 * order
    total = HalfSeries.zero(tr)
    h = fmpq(1, 2)
    j = 0
    while N + 1 + j < order:
        n = N + j
        rel = order - (N + 1 + j)
        c = (j + 1) * pochhammer(h, n) * pochhammer(3 * h, n) / (4 * factorial(n + 1) ** 2)
        a = hyp2f1_series(-h, n + h, n + 2, rel)
        b = hyp2f1_series(h, n + 3 * h, n + 2, rel)
        total = total + (a * b).scale(c).shift(2 * (N + 1 + j))
        j += 1
    return total.truncate(tr).normalize()


def g3_series(N: int, order: int) -> HalfSeries:
    """Three-particle exponential term G^(3)_{N,N} above T_c, by expanding
    the t-dependence of its triple integral into hypergeometric factors."""
    h = fmpq(1, 2)
    lead = 3 * N + 4  # halves
    tr = 2 * order
    if lead >= tr:
        return HalfSeries.zero(tr)
    span = (tr - lead + 1) // 2  # integer steps available

    def i1(a, n):
        m = N + a + 1
        return hyp2f1_series(h, N + a + 3 * h, N + a + 2, n).scale(pochhammer(h, m) / factorial(m))

    def i2(c, n):
        m = N + c + 1
        return hyp2f1_series(-h, N + c + 3 * h, N + c + 3, n).scale(
            pochhammer(h, m) / (2 * factorial(m + 1)))

    total = HalfSeries.zero(2 * span)
    for a in range(span):
        for b in range(span - a):
            n = span - a - b
            total = total + (i1(a, n) * i2(a + b, n) * i1(b, n)).shift(2 * (a + b))
    return (-total).shift(lead).truncate(tr).normalize()


# ---------------------------------------------------------------- regrouping

def exp_to_formfactor(F: Mapping[int, HalfSeries], G: Optional[Mapping[int, HalfSeries]] = None,
                      regime: str = "low") -> Dict[int, HalfSeries]:
    """Expand the exponential representation into form factors.

    Low: 1 + sum f^(2n) lambda^(2n) = exp(sum F^(2n) lambda^(2n)).
    High: sum f^(2n+1) lambda^(2n) = (sum G^(2m+1) lambda^(2m)) exp(sum F^(2n) lambda^(2n)),
    where the F's passed for the high regime are those at N+1.
    """
    if regime not in ("low", "high"):
        raise ValueError("regime must be 'low' or 'high'")
    if not F and regime == "low":
        return {}
    trunc = min([s.trunc for s in F.values()] + ([s.trunc for s in G.values()] if G else []))
    nmax = max([k // 2 for k in F] + ([k // 2 for k in G] if G else [0]))
    S = HalfSeries.zero(trunc, mu=True)
    for k, s in F.items():
        if k % 2:
            raise ValueError("F terms are indexed by even particle numbers")
        S = S + s.truncate(trunc).with_mu().scale(fmpq_poly([0] * (k // 2) + [1]))
    ex = S.exp() if not S.is_zero() else HalfSeries.one(trunc, mu=True)
    if regime == "low":
        return {2 * n: ex.mu_coefficient(n).normalize() for n in range(1, nmax + 1)}
    if not G:
        raise ValueError("the high regime needs the odd terms G")
    P = HalfSeries.zero(trunc, mu=True)
    for k, s in G.items():
        if k % 2 == 0:
            raise ValueError("G terms are indexed by odd particle numbers")
        P = P + s.truncate(trunc).with_mu().scale(fmpq_poly([0] * (k // 2) + [1]))
    prod = (P * ex).truncate(trunc)
    return {2 * n + 1: prod.mu_coefficient(n).normalize() for n in range(0, nmax + 1)}


# ---------------------------------------------------------------- Toeplitz

def _binom(p: fmpq, k: int) -> fmpq:
    out = fmpq(1)
    for i in range(k):
        out = out * (p - i) / (i + 1)
    return out


def toeplitz_symbol_coeff(k: int, n_alpha: int) -> HalfSeries:
    """z^k Laurent coefficient of ((1 - a/z)/(1 - a z))^(1/2) as a series in
    a = t^(1/2), known below a^n_alpha."""
    h = fmpq(1, 2)
    cs = [fmpq(0)] * n_alpha
    p = max(0, -k)
    while True:
        q = k + p
        e = p + q
        if e >= n_alpha:
            break
        cs[e] += _binom(h, p) * _binom(-h, q) * (-1) ** (p + q)
        p += 1
    return HalfSeries(cs, base=0, step=1, trunc=n_alpha)


def bareiss_det(M):
    """Fraction-free elimination over a ring with exact division."""
    n = len(M)
    M = [row[:] for row in M]
    prev = None
    for k in range(n - 1):
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = v if prev is None else v / prev
        prev = M[k][k]
    return M[n - 1][n - 1]


def toeplitz_corr_low(N: int, order: int) -> HalfSeries:
    """C_-(N,N) as the N x N Toeplitz determinant with alpha_1 = 0 and
    alpha_2 = t^(1/2), expanded below t^order."""
    if N < 1:
        raise ValueError("N must be at least 1")
    n_alpha = 2 * order
    sym = {k: toeplitz_symbol_coeff(k, n_alpha) for k in range(-(N - 1), N)}
    M = [[sym[i - j] for j in range(N)] for i in range(N)]
    d = bareiss_det(M)
    for e, c in d.items():
        if e % 2 and c != 0:
            raise SeriesError("odd powers of alpha survived in the determinant")
    return d.regrid(0, 2).truncate(2 * order)
