"""Exact rationals, univariate polynomials, rational functions and small
multivariate polynomials.

Rationals and dense univariate polynomials are FLINT's ``fmpq`` and
``fmpq_poly``; this module adds the canonical rational-function type used as
the coefficient field of differential operators, and a named-variable
polynomial wrapper for formal substitutions.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from flint import fmpq, fmpq_mpoly, fmpq_mpoly_ctx, fmpq_poly, fmpz

BigRat = fmpq
Poly = fmpq_poly

RatLike = Union[int, str, Fraction, fmpq, fmpz]


class AlgebraError(ArithmeticError):
    pass


class ZeroDenominator(AlgebraError, ZeroDivisionError):
    """Raised when a rational object would get a zero denominator."""


# ---------------------------------------------------------------- rationals

def rat(x: RatLike) -> fmpq:
    """Coerce ``x`` to an exact rational. Strings use the ``"p/q"`` form."""
    if isinstance(x, fmpq):
        return x
    if isinstance(x, (int, fmpz)):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            q = int(q)
            if q == 0:
                raise ZeroDenominator(s)
            return fmpq(int(p), q)
        return fmpq(int(s))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_str(q) -> str:
    q = rat(q)
    return str(q.p) if q.q == 1 else f"{q.p}/{q.q}"


def rat_to_float(q) -> float:
    q = rat(q)
    return int(q.p) / int(q.q)


# ---------------------------------------------------------------- polynomials

def poly(coeffs: Iterable[RatLike]) -> fmpq_poly:
    """Dense polynomial from low-to-high coefficients."""
    return fmpq_poly([rat(c) for c in coeffs])


def poly_coeffs(p: fmpq_poly) -> list:
    return list(p.coeffs())


def poly_to_strs(p: fmpq_poly) -> list:
    return [rat_str(c) for c in p.coeffs()]


def poly_from_strs(xs: Sequence[str]) -> fmpq_poly:
    return poly(rat(x) for x in xs)


def poly_arith(a: fmpq_poly, b: fmpq_poly, kind: str) -> fmpq_poly:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown kind {kind!r}")


T = fmpq_poly([0, 1])
ONE = fmpq_poly([1])


def poly_valuation(p: fmpq_poly) -> int:
    """Order of vanishing at 0; the zero polynomial raises."""
    if p.is_zero():
        raise ValueError("valuation of the zero polynomial")
    cs = p.coeffs()
    k = 0
    while cs[k] == 0:
        k += 1
    return k


def poly_compose(p: fmpq_poly, q: fmpq_poly) -> fmpq_poly:
    """p(q(t)) by Horner."""
    out = fmpq_poly([])
    for c in reversed(p.coeffs()):
        out = out * q + c
    return out


def poly_series_inverse(p: fmpq_poly, n: int) -> fmpq_poly:
    """Power-series inverse of ``p`` modulo t^n (p(0) must be nonzero)."""
    c0 = p.coeffs()[0] if not p.is_zero() else fmpq(0)
    if c0 == 0:
        raise ZeroDenominator("series inverse of a non-unit")
    g = fmpq_poly([1 / c0])
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = p.mul_low(g, k)
        g = g.mul_low(2 - e, k)
    return g.truncate(n) if n > 0 else fmpq_poly([])


# ---------------------------------------------------------------- RatFunc

class RatFunc:
    """num/den with gcd(num, den) = 1 and monic den. Immutable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced: bool = False):
        if not isinstance(num, fmpq_poly):
            num = fmpq_poly([rat(num)]) if not isinstance(num, (list, tuple)) else poly(num)
        if den is None:
            den = ONE
        elif not isinstance(den, fmpq_poly):
            den = fmpq_poly([rat(den)]) if not isinstance(den, (list, tuple)) else poly(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = ONE
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num // g
                    den = den // g
                lc = den.leading_coefficient()
                if lc != 1:
                    num = num / lc
                    den = den / lc
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(fmpq_poly([rat(c)]), ONE, _reduced=True)

    @classmethod
    def from_strs(cls, num: Sequence[str], den: Sequence[str]) -> "RatFunc":
        return cls(poly_from_strs(num), poly_from_strs(den))

    def to_strs(self) -> dict:
        return {"num": poly_to_strs(self.num), "den": poly_to_strs(self.den)}

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree() == 0

    def is_const(self) -> bool:
        return self.den.degree() == 0 and self.num.degree() <= 0

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = _as_rf(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    # arithmetic
    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        o = _as_rf(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        o = _as_rf(other)
        if o.den.degree() == 0 and o.num.degree() <= 0:
            if o.num.is_zero():
                return ZERO_RF
            return RatFunc(self.num * o.num.coeffs()[0], self.den, _reduced=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDenominator("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * _as_rf(other).inv()

    def __rtruediv__(self, other):
        return _as_rf(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _reduced=True)

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x):
        """Evaluate at an exact rational."""
        x = rat(x)
        dv = self.den(x)
        if dv == 0:
            raise ZeroDenominator(f"pole at {x}")
        return self.num(x) / dv

    def compose(self, q: "RatFunc") -> "RatFunc":
        """self(q(t))."""
        q = _as_rf(q)
        num = _horner_rf(self.num, q)
        den = _horner_rf(self.den, q)
        return num / den

    def valuation(self) -> int:
        """Order at t=0 (negative for a pole)."""
        return poly_valuation(self.num) - poly_valuation(self.den)

    def laurent(self, n: int):
        """Return (v, cs) with self = t^v * sum(cs[i] t^i) + O(t^(v+n))."""
        if self.is_zero():
            return 0, [fmpq(0)] * n
        vn = poly_valuation(self.num)
        vd = poly_valuation(self.den)
        num = self.num.right_shift(vn) if vn else self.num
        den = self.den.right_shift(vd) if vd else self.den
        s = num.mul_low(poly_series_inverse(den, n), n)
        cs = list(s.coeffs()) + [fmpq(0)] * n
        return vn - vd, cs[:n]

    def __repr__(self):
        if self.is_poly():
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num})/({self.den}))"


def _as_rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, fmpq_poly):
        return RatFunc(x, ONE, _reduced=True)
    if isinstance(x, (int, fmpq, fmpz, Fraction, str)):
        return RatFunc.const(x)
    raise TypeError(f"not a rational function: {type(x).__name__}")


def _horner_rf(p: fmpq_poly, q: RatFunc) -> RatFunc:
    out = ZERO_RF
    for c in reversed(p.coeffs()):
        out = out * q + RatFunc.const(c)
    return out


def ratfunc_normalize(num: fmpq_poly, den: fmpq_poly) -> RatFunc:
    return RatFunc(num, den)


ZERO_RF = RatFunc(fmpq_poly([]), ONE, _reduced=True)
ONE_RF = RatFunc(ONE, ONE, _reduced=True)
T_RF = RatFunc(T, ONE, _reduced=True)


# ---------------------------------------------------------------- BiPoly

class BiPoly:
    """Polynomial with rational coefficients in a few named indeterminates.

    Despite the name it is not limited to two variables; the covariance
    checks use (t, s, s1, s2) and an extra symbol for N^2.
    """

    __slots__ = ("ctx", "p")

    def __init__(self, ctx: fmpq_mpoly_ctx, p: fmpq_mpoly):
        self.ctx = ctx
        self.p = p

    @staticmethod
    def context(names: Sequence[str]) -> fmpq_mpoly_ctx:
        return fmpq_mpoly_ctx.get(tuple(names), "lex")

    @classmethod
    def gens(cls, names: Sequence[str]):
        ctx = cls.context(names)
        return tuple(cls(ctx, g) for g in ctx.gens())

    @classmethod
    def const(cls, ctx, c) -> "BiPoly":
        return cls(ctx, ctx.constant(rat(c)))

    @classmethod
    def from_dict(cls, ctx, d: Mapping[tuple, RatLike]) -> "BiPoly":
        return cls(ctx, ctx.from_dict({k: rat(v) for k, v in d.items()}))

    def to_dict(self) -> dict:
        return {tuple(k): v for k, v in self.p.to_dict().items()}

    @property
    def names(self):
        return self.ctx.names()

    def _lift(self, o):
        if isinstance(o, BiPoly):
            return o.p
        return self.ctx.constant(rat(o))

    def __add__(self, o):
        return BiPoly(self.ctx, self.p + self._lift(o))

    __radd__ = __add__

    def __sub__(self, o):
        return BiPoly(self.ctx, self.p - self._lift(o))

    def __rsub__(self, o):
        return BiPoly(self.ctx, self._lift(o) - self.p)

    def __mul__(self, o):
        return BiPoly(self.ctx, self.p * self._lift(o))

    __rmul__ = __mul__

    def __neg__(self):
        return BiPoly(self.ctx, -self.p)

    def __pow__(self, k: int):
        return BiPoly(self.ctx, self.p ** k)

    def __eq__(self, o):
        if isinstance(o, BiPoly):
            return self.p == o.p
        return self.p == self._lift(o)

    def __hash__(self):
        return hash(str(self.p))

    def is_zero(self) -> bool:
        return self.p.is_zero()

    def degree_in(self, name: str) -> int:
        i = list(self.ctx.names()).index(name)
        return self.p.degrees()[i]

    def divmod(self, o: "BiPoly"):
        q, r = divmod(self.p, o.p)
        return BiPoly(self.ctx, q), BiPoly(self.ctx, r)

    def __repr__(self):
        return f"BiPoly({self.p})"


class BiRat:
    """Reduced quotient of two BiPoly values sharing a context."""

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly):
        if den.is_zero():
            raise ZeroDenominator("formal denominator is zero")
        g = num.p.gcd(den.p)
        n, d = num.p, den.p
        if not g.is_constant():
            n = n / g
            d = d / g
        lc = d.leading_coefficient()
        if lc != 1:
            n = n / lc
            d = d / lc
        self.num = BiPoly(num.ctx, n)
        self.den = BiPoly(num.ctx, d)

    def is_poly(self) -> bool:
        return self.den.p.is_constant()

    def __eq__(self, o):
        if isinstance(o, BiRat):
            return self.num == o.num and self.den == o.den
        if isinstance(o, BiPoly):
            return self.is_poly() and self.num == o
        return self.is_poly() and self.num == o

    def __repr__(self):
        return f"BiRat({self.num.p} / {self.den.p})"


def bipoly_substitute(p: BiPoly, maps: Mapping[str, object]):
    """Formally substitute indeterminates of ``p``.

    Each value in ``maps`` is a BiPoly, a constant, or a ``(num, den)`` pair of
    BiPoly for a rational substitution. Unmapped variables stay put. Returns a
    BiPoly when every substitution is polynomial, otherwise a reduced BiRat.
    """
    ctx = p.ctx
    names = list(ctx.names())
    gens = ctx.gens()
    nums, dens = [], []
    for i, nm in enumerate(names):
        v = maps.get(nm, None)
        if v is None:
            nums.append(gens[i])
            dens.append(None)
        elif isinstance(v, tuple):
            n, d = v
            n = n.p if isinstance(n, BiPoly) else ctx.constant(rat(n))
            d = d.p if isinstance(d, BiPoly) else ctx.constant(rat(d))
            if d.is_zero():
                raise ZeroDenominator(f"substitution for {nm} has zero denominator")
            if d.is_constant():
                nums.append(n / d.leading_coefficient())
                dens.append(None)
            else:
                nums.append(n)
                dens.append(d)
        elif isinstance(v, BiPoly):
            nums.append(v.p)
            dens.append(None)
        else:
            nums.append(ctx.constant(rat(v)))
            dens.append(None)

    if all(d is None for d in dens):
        return BiPoly(ctx, p.p.compose(*nums, ctx=ctx))

    # homogenize: multiply through by prod d_i^{deg_i}
    degs = p.p.degrees()
    total = ctx.constant(0)
    npow = [dict() for _ in names]
    dpow = [dict() for _ in names]

    def pw(cache, base, k):
        if k not in cache:
            cache[k] = base ** k
        return cache[k]

    for mon, c in p.p.to_dict().items():
        term = ctx.constant(c)
        for i, e in enumerate(mon):
            if dens[i] is None:
                if e:
                    term = term * pw(npow[i], nums[i], e)
            else:
                if e:
                    term = term * pw(npow[i], nums[i], e)
                if degs[i] - e:
                    term = term * pw(dpow[i], dens[i], degs[i] - e)
        total = total + term
    den = ctx.constant(1)
    for i, d in enumerate(dens):
        if d is not None and degs[i]:
            den = den * d ** degs[i]
    return BiRat(BiPoly(ctx, total), BiPoly(ctx, den))


# ---------------------------------------------------------------- linear algebra

def rational_nullspace(rows: Sequence[Sequence]) -> list:
    """Basis of the right nullspace of a rational matrix (list of rows)."""
    from flint import fmpq_mat

    m = len(rows)
    n = len(rows[0]) if m else 0
    M = fmpq_mat(m, n, [rat(x) for r in rows for x in r])
    R, rank = M.rref()
    pivots = []
    r = 0
    for c in range(n):
        if r < rank and R[r, c] != 0:
            pivots.append(c)
            r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [fmpq(0)] * n
        v[f] = fmpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i, f]
        basis.append(v)
    return basis
