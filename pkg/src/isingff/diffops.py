"""Linear differential operators with rational-function coefficients.

An ``OreOp`` is sum_k c_k(v) D^k with D = d/dv, v the variable tag ("t" or
"x"). Operators whose coefficients depend polynomially on N^2 are kept as
``NOreOp`` (a map n -> OreOp, the coefficient of N^(2n)) and instantiated at
an exact rational N when needed. Only the scaling limit works symbolically
in N.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from flint import fmpq, fmpq_poly

from ._data import load_json
from .algebra import ONE_RF, ZERO_RF, RatFunc, _as_rf, rat, rational_nullspace
from .series import HalfSeries


class DiffOpError(ArithmeticError):
    pass


class VariableMismatch(DiffOpError, ValueError):
    pass


class TruncationTooShort(DiffOpError):
    pass


class SingularReduction(DiffOpError):
    pass


class NoUniformLeadingPower(DiffOpError):
    pass


class NotTabulated(KeyError):
    pass


# ---------------------------------------------------------------- OreOp

class OreOp:
    """sum_k coeffs[k] D^k. Immutable; trailing zero coefficients are dropped."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "t"):
        cs = [_as_rf(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def D(cls, var: str = "t") -> "OreOp":
        return cls([ZERO_RF, ONE_RF], var)

    @classmethod
    def const(cls, c, var: str = "t") -> "OreOp":
        return cls([_as_rf(c)], var)

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], var: str = "t") -> "OreOp":
        if not terms:
            return cls([], var)
        cs = [ZERO_RF] * (max(terms) + 1)
        for d, c in terms.items():
            cs[d] = cs[d] + _as_rf(c)
        return cls(cs, var)

    # ------------------------------------------------------------ basics
    @property
    def order(self) -> int:
        """Order in D; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> RatFunc:
        if not self.coeffs:
            raise DiffOpError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "OreOp":
        lc = self.leading().inv()
        return OreOp([c * lc for c in self.coeffs], self.var)

    def _same_var(self, other: "OreOp"):
        if self.var != other.var:
            raise VariableMismatch(f"operators in {self.var} and {other.var}")

    def __eq__(self, other):
        if not isinstance(other, OreOp):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        parts = [f"({c})*D^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"OreOp[{self.var}](" + " + ".join(parts or ["0"]) + ")"

    # ------------------------------------------------------------ arithmetic
    def __add__(self, other):
        if not isinstance(other, OreOp):
            other = OreOp.const(other, self.var)
        self._same_var(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [ZERO_RF] * (n - len(self.coeffs))
        b = list(other.coeffs) + [ZERO_RF] * (n - len(other.coeffs))
        return OreOp([x + y for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return OreOp([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other if isinstance(other, OreOp) else OreOp.const(-_as_rf(other), self.var))

    def __rsub__(self, other):
        return (-self) + other

    def lmul(self, f) -> "OreOp":
        """f * self for a rational function f."""
        f = _as_rf(f)
        return OreOp([f * c for c in self.coeffs], self.var)

    def __mul__(self, other):
        if isinstance(other, OreOp):
            return multiply(self, other)
        return multiply(self, OreOp.const(other, self.var))

    def __rmul__(self, other):
        return self.lmul(other)

    def d_left(self) -> "OreOp":
        """D * self."""
        cs = [ZERO_RF] * (len(self.coeffs) + 1)
        for k, c in enumerate(self.coeffs):
            cs[k] = cs[k] + c.derivative()
            cs[k + 1] = cs[k + 1] + c
        return OreOp(cs, self.var)

    def pole_depth(self) -> int:
        """Largest pole order at the origin among the coefficients."""
        return max([0] + [-c.valuation() for c in self.coeffs if not c.is_zero()])

    def to_json(self) -> dict:
        return {"var": self.var,
                "coeffs": [{"D": k, **c.to_strs()} for k, c in enumerate(self.coeffs) if not c.is_zero()]}


def multiply(a: OreOp, b: OreOp) -> OreOp:
    """Noncommutative product a*b, using D f = f D + f'."""
    a._same_var(b)
    if a.is_zero() or b.is_zero():
        return OreOp([], a.var)
    out = [ZERO_RF] * (a.order + b.order + 1)
    cur = b
    for i, ai in enumerate(a.coeffs):
        if i:
            cur = cur.d_left()
        if ai.is_zero():
            continue
        for k, c in enumerate(cur.coeffs):
            out[k] = out[k] + ai * c
    return OreOp(out, a.var)


def compose(*ops: OreOp) -> OreOp:
    """Left-to-right product ops[0] * ops[1] * ..."""
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = multiply(op, out)
    return out


def right_divide(a: OreOp, b: OreOp) -> Tuple[OreOp, OreOp]:
    """(q, r) with a = q*b + r and ord r < ord b."""
    a._same_var(b)
    if b.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    shifts = [b]
    q = [ZERO_RF] * max(a.order - b.order + 1, 1)
    r = a
    lb = b.leading().inv()
    while r.order >= b.order:
        s = r.order - b.order
        while len(shifts) <= s:
            shifts.append(shifts[-1].d_left())
        c = r.leading() * lb
        q[s] = q[s] + c
        # D^s b has leading coefficient lc(b), so the top term cancels exactly
        sub = shifts[s].lmul(c)
        cs = list(r.coeffs)
        for k, x in enumerate(sub.coeffs):
            cs[k] = cs[k] - x
        cs[-1] = ZERO_RF
        r = OreOp(cs, a.var)
    return OreOp(q, a.var), r


def proportional_eq(a: OreOp, b: OreOp) -> bool:
    """True iff a and b agree after dividing each by its leading coefficient."""
    a._same_var(b)
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return a.monic() == b.monic()


# ---------------------------------------------------------------- application

def _shift_bound(op: OreOp) -> int:
    """min over k of 2*val(c_k) - 2k: the lowest exponent shift, in halves."""
    return min(2 * c.valuation() - 2 * k for k, c in enumerate(op.coeffs) if not c.is_zero())


def apply(op: OreOp, s: HalfSeries) -> HalfSeries:
    """op applied to a truncated series.

    Each term c_k D^k moves exponents by at least m = min_k(2 val c_k - 2k)
    halves, so the result is exact below t^((s.trunc + m)/2). This is never
    shorter than the cruder bound s.trunc - 2*(ord + pole depth).
    """
    if op.is_zero():
        return HalfSeries.zero(s.trunc)
    m = _shift_bound(op)
    T = s.trunc + m
    low = s.base + m
    if T <= low:
        raise TruncationTooShort(f"series known below t^{s.trunc / 2} is too short for "
                                 f"an order-{op.order} operator")
    total = HalfSeries.zero(T, base=low if low % 2 == 0 else low - 1)
    ds = s
    for k, c in enumerate(op.coeffs):
        if k:
            ds = ds.derivative()
        if c.is_zero():
            continue
        v, _ = c.laurent(1)
        n = max(1, (T - 2 * v - ds.base + 1) // 2 + 1)
        v, cs = c.laurent(n)
        cser = HalfSeries(cs, base=2 * v, step=2, trunc=2 * (v + n))
        total = total + (cser * ds).truncate(T)
    return total.truncate(T)


def checked_coefficients(op: OreOp, s: HalfSeries) -> int:
    """Number of integer t-steps of apply(op, s) that carry information: the
    span from the lowest possible output exponent up to the truncation."""
    v = s.valuation()
    if v is None:
        return 0
    return max(0, (s.trunc - v) // 2)


# ---------------------------------------------------------------- symmetric powers

def _solve_rf(rows: Sequence[Sequence[RatFunc]], rhs: Sequence[RatFunc]) -> list:
    """Gaussian elimination over the rational-function field."""
    n = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if not M[i][col].is_zero()), None)
        if piv is None:
            raise SingularReduction("derivative reduction is rank deficient")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inv()
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and not M[i][col].is_zero():
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [M[i][n] for i in range(n)]


def sym_power(L: OreOp, j: int) -> OreOp:
    """Monic operator of order j+1 annihilating every y1^(j-i) y2^i, where
    y1, y2 solve the second order operator L."""
    if L.order != 2:
        raise ValueError("sym_power needs an operator of order exactly 2")
    if j < 1:
        raise ValueError("j must be at least 1")
    c0, c1, c2 = L.coeffs
    if c2.is_zero():
        raise SingularReduction("leading coefficient vanishes")
    a = -c1 / c2
    b = -c0 / c2
    # vectors over the basis m_i = y^(j-i) y'^i, i = 0..j
    vecs = [[ONE_RF] + [ZERO_RF] * j]
    for _ in range(j + 1):
        v = vecs[-1]
        w = [x.derivative() for x in v]
        for i, x in enumerate(v):
            if x.is_zero():
                continue
            if i < j:
                w[i + 1] = w[i + 1] + x * (j - i)
            if i:
                # i * y^(j-i) y'^(i-1) (a y' + b y)
                w[i] = w[i] + x * a * i
                w[i - 1] = w[i - 1] + x * b * i
        vecs.append(w)
    # vecs[j+1] = sum_k cf[k] vecs[k]
    rows = [[vecs[k][i] for k in range(j + 1)] for i in range(j + 1)]
    cf = _solve_rf(rows, vecs[j + 1])
    return OreOp([-c for c in cf] + [ONE_RF], L.var)


# ---------------------------------------------------------------- N-dependent operators

class NOreOp:
    """sum_n N^(2n) ops[n]."""

    __slots__ = ("parts", "var")

    def __init__(self, parts: Mapping[int, OreOp], var: str = "t"):
        self.parts = {n: p for n, p in parts.items() if not p.is_zero()}
        self.var = var

    @property
    def order(self) -> int:
        return max((p.order for p in self.parts.values()), default=-1)

    def instantiate(self, N) -> OreOp:
        N2 = rat(N) ** 2
        out = OreOp([], self.var)
        for n, p in self.parts.items():
            out = out + (p.lmul(N2 ** n) if n else p)
        return out

    def __mul__(self, other: "NOreOp") -> "NOreOp":
        out: Dict[int, OreOp] = {}
        for n, p in self.parts.items():
            for m, q in other.parts.items():
                pq = multiply(p, q)
                out[n + m] = out[n + m] + pq if n + m in out else pq
        return NOreOp(out, self.var)


def _taylor_at_one(p: fmpq_poly) -> Tuple[int, fmpq]:
    """(m, c) with p(1 + u) = c u^m + O(u^(m+1)), c != 0."""
    m = 0
    while True:
        v = p(fmpq(1))
        if v != 0:
            return m, v / _fact(m)
        p = p.derivative()
        m += 1


def _fact(m: int) -> fmpq:
    out = fmpq(1)
    for i in range(2, m + 1):
        out *= i
    return out


def scale_limit(op: NOreOp) -> OreOp:
    """Leading behaviour of op under t = 1 - x/N, D_t = -N D_x as N -> oo,
    returned monic in x."""
    if op.var != "t":
        raise VariableMismatch("scale_limit expects an operator in t")
    best: Optional[int] = None
    terms: Dict[int, Dict[int, RatFunc]] = {}
    for n, part in op.parts.items():
        for d, r in enumerate(part.coeffs):
            if r.is_zero():
                continue
            mp, cp = _taylor_at_one(r.num)
            mq, cq = _taylor_at_one(r.den)
            m = mp - mq
            power = 2 * n + d - m
            # r(1 - x/N) ~ (cp/cq) (-x/N)^m
            c = (cp / cq) if (m + d) % 2 == 0 else -(cp / cq)
            mono = RatFunc(fmpq_poly([0] * m + [c])) if m >= 0 else RatFunc(c, fmpq_poly([0] * (-m) + [1]))
            bucket = terms.setdefault(power, {})
            bucket[d] = bucket.get(d, ZERO_RF) + mono
    if not terms:
        raise NoUniformLeadingPower("zero operator")
    top = max(terms)
    lead = OreOp.from_terms(terms[top], "x")
    if lead.is_zero():
        raise NoUniformLeadingPower(f"leading N^{top} terms cancel; the limit needs the next order")
    return lead.monic()


# ---------------------------------------------------------------- tables

_ALIASES = {"B_bessel": "Bessel", "L_E": "LE", "L_h": "Lh", "Sym2": "Sym2_L2"}


@lru_cache(maxsize=1)
def _records() -> dict:
    return {r["id"]: r for r in load_json("operators.json")["operators"]}


def table_ids() -> list:
    return sorted(_records())


def _record_to_nop(rec: dict) -> NOreOp:
    var = rec["var"]
    parts: Dict[int, Dict[int, RatFunc]] = {}
    if rec["N_form"]:
        j = rec["order"]
        tt = RatFunc(fmpq_poly([0, 1]))
        tt1 = RatFunc(fmpq_poly([0, -1, 1]))
        for tm in rec["terms"]:
            n, k = tm["n"], tm["k"]
            P = RatFunc(fmpq_poly([rat(c) for c in tm["poly"]]))
            c = P / (tt ** (2 * n) * tt1 ** k)
            d = j - 2 * n - k
            bucket = parts.setdefault(n, {})
            bucket[d] = bucket.get(d, ZERO_RF) + c
    else:
        for tm in rec["terms"]:
            c = RatFunc(fmpq_poly([rat(x) for x in tm["num"]]), fmpq_poly([rat(x) for x in tm["den"]]))
            bucket = parts.setdefault(tm["n"], {})
            bucket[tm["d"]] = bucket.get(tm["d"], ZERO_RF) + c
    return NOreOp({n: OreOp.from_terms(b, var) for n, b in parts.items()}, var)


def _f_factors(j: int) -> list:
    """F_j = L_{j+1} L_{j-1} ... down to L_2 (odd j) or L_1 (even j); F_0 = 1."""
    if j == 0:
        return []
    if not 1 <= j <= 9:
        raise NotTabulated(f"F_{j} needs L_{j + 1}, beyond the embedded tables")
    return [f"L{k}" for k in range(j + 1, 0, -2)]


def _erratum_m4_1(op: NOreOp) -> NOreOp:
    # the printed P_2 lacks its linear monomial -1984 t
    t = fmpq_poly([0, 1])
    t1 = fmpq_poly([-1, 1])
    p4 = fmpq_poly([16, -120, 209, -120, 16])
    fix = RatFunc(fmpq_poly([-992]), t1 ** 2 * t * p4)
    return NOreOp({0: op.parts[0] + OreOp([ZERO_RF, ZERO_RF, fix], op.var)}, op.var)


def _erratum_sym2(op: NOreOp) -> NOreOp:
    # the N^2 D term is printed as -N^2/t; the reduction gives -N^2/t^2
    t = fmpq_poly([0, 1])
    fix = RatFunc(fmpq_poly([0, 1]) - 1, t ** 2)
    parts = dict(op.parts)
    parts[1] = parts[1] + OreOp([ZERO_RF, fix], op.var)
    return NOreOp(parts, op.var)


def _with_d1(op: NOreOp, c: RatFunc) -> NOreOp:
    cs = list(op.parts[0].coeffs)
    cs[1] = c
    return NOreOp({0: OreOp(cs, op.var)}, op.var)


def _erratum_l14_1(op: NOreOp) -> NOreOp:
    # the D term is printed without its factor 1/8
    return _with_d1(op, RatFunc(fmpq_poly([2, -7, 5]) / 8))


def _erratum_l14_2(op: NOreOp) -> NOreOp:
    # the D term is -(t-1)(7t^2-2t+16)/8; the print shows (t-1)(t^2-2t+16)
    return _with_d1(op, RatFunc(-fmpq_poly([-1, 1]) * fmpq_poly([16, -2, 7]) / 8))


ERRATA = {"M4_1": _erratum_m4_1, "Sym2_L2": _erratum_sym2,
          "L14_1": _erratum_l14_1, "L14_2": _erratum_l14_2}


@lru_cache(maxsize=64)
def build_symbolic(table_id: str, printed: bool = False) -> NOreOp:
    """Operator from the embedded tables, polynomial in N^2. Corrections in
    ERRATA are applied unless printed=True."""
    table_id = _ALIASES.get(table_id, table_id)
    if table_id.startswith("F") and table_id[1:].isdigit():
        out = NOreOp({0: OreOp.const(1)})
        for name in _f_factors(int(table_id[1:])):
            op = build_symbolic(name)
            out = out * op
        return out
    rec = _records().get(table_id)
    if rec is None:
        raise NotTabulated(f"no operator '{table_id}' in the embedded tables")
    op = _record_to_nop(rec)
    if not printed and table_id in ERRATA:
        op = ERRATA[table_id](op)
    return op


_PER_N = {"M4": "M4_{}", "Q": "Q{}", "L14": "L14_{}", "L13": "L13_{}"}


@lru_cache(maxsize=256)
def _build_cached(table_id: str, N: Optional[fmpq], printed: bool = False) -> OreOp:
    if table_id in _PER_N:
        if N is None or N.q != 1:
            raise NotTabulated(f"'{table_id}' is tabulated per integer N")
        return _build_cached(_PER_N[table_id].format(int(N)), None, printed)
    table_id = _ALIASES.get(table_id, table_id)
    if table_id.startswith("F") and table_id[1:].isdigit():
        ops = [_build_cached(name, N) for name in _f_factors(int(table_id[1:]))]
        return compose(*ops) if ops else OreOp.const(1)
    nop = build_symbolic(table_id, printed)
    if N is None:
        if any(n for n in nop.parts):
            raise ValueError(f"'{table_id}' depends on N; pass a value")
        N = fmpq(0)
    return nop.instantiate(N)


def build(table_id: str, N=None, printed: bool = False) -> OreOp:
    """Exact operator for a table id (``L2``, ``F5``, ``M4``, ``Bessel``, ...)
    with N substituted where the table depends on it."""
    return _build_cached(table_id, None if N is None else rat(N), printed)


# ---------------------------------------------------------------- solution transport

def bessel_i0_series(order: int) -> HalfSeries:
    """Analytic solution sum_k (x/4)^(2k)/k!^2 of D^2 + D/x - 1/4, below x^order."""
    cs = []
    c = fmpq(1)
    for k in range(0, (order + 1) // 2):
        cs.append(c)
        cs.append(fmpq(0))
        c = c / (16 * (k + 1) ** 2)
    return HalfSeries(cs[:order], base=0, step=2, trunc=2 * order)


def transport_search(target: OreOp, y: HalfSeries, w_order: int, deg: int,
                     check: int) -> list:
    """Operators W = sum_{k<=w_order} p_k(v) D^k with deg p_k <= deg such that
    target annihilates W(y) below v^check. Returns a basis of such W with
    W(y) nonzero."""
    var = target.var
    basis_ops = []
    images = []
    for k in range(w_order + 1):
        for m in range(deg + 1):
            cs = [ZERO_RF] * (k + 1)
            cs[k] = RatFunc(fmpq_poly([0] * m + [1]))
            W = OreOp(cs, var)
            basis_ops.append(W)
            images.append(apply(target, apply(W, y)))
    T = min(im.trunc for im in images)
    if T < 2 * check:
        raise TruncationTooShort("input series too short for the requested check order")
    exps = sorted({e for im in images for e, _ in im.items() if e < 2 * check})
    rows = [[im.coeff(e) for im in images] for e in exps]
    out = []
    for vec in rational_nullspace(rows):
        W = OreOp([], var)
        for c, b in zip(vec, basis_ops):
            if c != 0:
                W = W + b.lmul(c)
        if not apply(W, y).is_zero():
            out.append(W)
    return out


def conjugate_power(op: OreOp, a) -> OreOp:
    """v^(-a) * op * v^a, i.e. D replaced by D + a/v."""
    a = rat(a)
    shift = OreOp([RatFunc(fmpq_poly([a]), fmpq_poly([0, 1])), ONE_RF], op.var)
    out = OreOp([], op.var)
    power = OreOp.const(1, op.var)
    for k, c in enumerate(op.coeffs):
        if k:
            power = multiply(power, shift)
        out = out + power.lmul(c)
    return out
