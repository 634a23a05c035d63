"""Truncated power series on the half-integer grid t^(1/2).

A :class:`HalfSeries` stores coefficients for exponents
``base/2, (base+step)/2, ...`` strictly below ``trunc/2``. Exponents are kept
in units of halves so that mixed-parity arithmetic is unambiguous. The
coefficient ring is either the rationals (``fmpq``) or polynomials in
mu = lambda^2 (``fmpq_poly``); series of the second kind are called lambda
series throughout the package.
"""
from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

from flint import fmpq, fmpq_poly

from .algebra import rat, rat_str, rat_to_float


class SeriesError(ArithmeticError):
    pass


class DivisionByZeroSeries(SeriesError, ZeroDivisionError):
    pass


class NonUnitLeadingCoefficient(SeriesError):
    pass


class NegativeArgumentForHalfPower(SeriesError, ValueError):
    pass


_Q0 = fmpq(0)
_P0 = fmpq_poly([])


def _is_zero(c) -> bool:
    return c == 0


def _coerce(c, mu: bool):
    if mu:
        if isinstance(c, fmpq_poly):
            return c
        if isinstance(c, (list, tuple)):
            return fmpq_poly([rat(x) for x in c])
        return fmpq_poly([rat(c)])
    if isinstance(c, fmpq):
        return c
    if isinstance(c, fmpq_poly):
        raise TypeError("lambda-polynomial coefficient in a rational series")
    return rat(c)


def _mul_low(a: Sequence, b: Sequence, n: int, mu: bool) -> list:
    """First n coefficients of the product of two coefficient lists."""
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [_P0 if mu else _Q0] * n
    if not mu:
        p = fmpq_poly(list(a)).mul_low(fmpq_poly(list(b)), n)
        cs = p.coeffs()
        return cs + [_Q0] * (n - len(cs))
    # Kronecker packing: mu-degree blocks of width S
    da = max((c.degree() for c in a), default=-1)
    db = max((c.degree() for c in b), default=-1)
    if da < 0 or db < 0:
        return [_P0] * n
    S = da + db + 1
    A = _pack(a, S)
    B = _pack(b, S)
    cs = A.mul_low(B, n * S).coeffs()
    out = []
    for i in range(n):
        blk = cs[i * S:(i + 1) * S]
        out.append(fmpq_poly(blk) if blk else _P0)
    return out


def _pack(cs: Sequence[fmpq_poly], S: int) -> fmpq_poly:
    flat = []
    for c in cs:
        blk = c.coeffs()
        flat.extend(blk)
        flat.extend([_Q0] * (S - len(blk)))
    return fmpq_poly(flat)


def _inv_unit(u: Sequence, n: int, mu: bool) -> list:
    """Inverse of a unit coefficient list modulo u^n (Newton iteration)."""
    c0 = u[0]
    if mu:
        if c0.degree() != 0:
            raise DivisionByZeroSeries("leading coefficient is not a unit in Q[mu]")
        c0 = c0.coeffs()[0]
    if c0 == 0:
        raise DivisionByZeroSeries("leading coefficient vanishes")
    if not mu:
        from .algebra import poly_series_inverse

        cs = poly_series_inverse(fmpq_poly(list(u[:n])), n).coeffs()
        return cs + [_Q0] * (n - len(cs))
    g = [fmpq_poly([1 / c0])]
    k = 1
    while k < n:
        k = min(2 * k, n)
        e = _mul_low(u, g, k, True)
        e = [-c for c in e]
        e[0] = e[0] + 2
        g = _mul_low(g, e, k, True)
    return g[:n]


class HalfSeries:
    """Immutable truncated series in t^(1/2). See module docstring."""

    __slots__ = ("base", "step", "coeffs", "trunc", "mu")

    def __init__(self, coeffs: Iterable = (), base: int = 0, step: int = 2,
                 trunc: Optional[int] = None, mu: Optional[bool] = None):
        cs = list(coeffs)
        if mu is None:
            mu = any(isinstance(c, (fmpq_poly, list, tuple)) for c in cs)
        if step not in (1, 2):
            raise ValueError("step must be 1 or 2 halves")
        if trunc is None:
            trunc = base + step * len(cs)
        if step == 2 and base % 2:
            # odd base with integer spacing is represented on the fine grid
            fine = []
            for c in cs:
                fine.append(c)
                fine.append(0)
            cs, step = fine, 1
        n = max(0, -((base - trunc) // step))
        zero = _P0 if mu else _Q0
        cs = [_coerce(c, mu) for c in cs[:n]]
        if len(cs) < n:
            cs.extend([zero] * (n - len(cs)))
        self.base = base
        self.step = step
        self.coeffs = tuple(cs)
        self.trunc = trunc
        self.mu = mu

    # ------------------------------------------------------------ basics
    @classmethod
    def _raw(cls, cs, base, step, trunc, mu):
        s = object.__new__(cls)
        s.base, s.step, s.coeffs, s.trunc, s.mu = base, step, tuple(cs), trunc, mu
        return s

    @classmethod
    def zero(cls, trunc: int, mu: bool = False, base: int = 0, step: int = 2):
        return cls([], base=base, step=step, trunc=trunc, mu=mu)

    @classmethod
    def one(cls, trunc: int, mu: bool = False):
        return cls([1], base=0, step=2, trunc=trunc, mu=mu)

    @classmethod
    def from_poly(cls, p: fmpq_poly, trunc: int):
        """Polynomial in t as an integer-step series."""
        return cls(list(p.coeffs()), base=0, step=2, trunc=trunc)

    @classmethod
    def monomial(cls, c, e_halves: int, trunc: int, mu: bool = False):
        return cls([c], base=e_halves, step=2 if e_halves % 2 == 0 else 1, trunc=trunc, mu=mu)

    @property
    def zero_coeff(self):
        return _P0 if self.mu else _Q0

    def exponents(self):
        return [self.base + i * self.step for i in range(len(self.coeffs))]

    def items(self):
        """(exponent in halves, coefficient) pairs, zeros included."""
        return list(zip(self.exponents(), self.coeffs))

    def coeff(self, e_halves: int):
        if e_halves >= self.trunc:
            raise SeriesError(f"coefficient t^({e_halves}/2) is beyond truncation")
        off = e_halves - self.base
        if off < 0 or off % self.step:
            return self.zero_coeff
        return self.coeffs[off // self.step]

    def __getitem__(self, e_halves: int):
        return self.coeff(e_halves)

    def coeff_t(self, k: int):
        """Coefficient of t^k for integer k."""
        return self.coeff(2 * k)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        terms = []
        for e, c in self.items():
            if not _is_zero(c):
                terms.append(f"({c})*t^({e}/2)")
            if len(terms) > 6:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"HalfSeries({body} + O(t^({self.trunc}/2)))"

    # ------------------------------------------------------------ grid handling
    def regrid(self, base: int, step: int) -> "HalfSeries":
        """Same series laid out on a grid starting at ``base`` with ``step``."""
        if base > self.base:
            for e, c in self.items():
                if e < base and not _is_zero(c):
                    raise SeriesError("regrid would drop a nonzero coefficient")
        if step == 2 and self.step == 1:
            for e, c in self.items():
                if (e - base) % 2 and not _is_zero(c):
                    raise SeriesError("series has half-integer terms")
        if base == self.base and step == self.step:
            return self
        n = max(0, -((base - self.trunc) // step))
        z = self.zero_coeff
        out = [z] * n
        for e, c in self.items():
            off = e - base
            if off >= 0 and off % step == 0:
                i = off // step
                if i < n:
                    out[i] = c
        return HalfSeries._raw(out, base, step, self.trunc, self.mu)

    def valuation(self) -> Optional[int]:
        for e, c in self.items():
            if not _is_zero(c):
                return e
        return None

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def normalize(self) -> "HalfSeries":
        """Strip leading zeros and use the coarse grid when possible."""
        v = self.valuation()
        if v is None:
            return HalfSeries([], base=0, step=2, trunc=self.trunc, mu=self.mu)
        step = 1
        if v % 2 == 0 and all(_is_zero(c) for e, c in self.items() if e % 2):
            step = 2
        return self.regrid(v, step)

    def truncate(self, trunc: int) -> "HalfSeries":
        if trunc >= self.trunc:
            return self
        return HalfSeries(self.coeffs, base=self.base, step=self.step, trunc=trunc, mu=self.mu)

    def with_mu(self) -> "HalfSeries":
        if self.mu:
            return self
        return HalfSeries._raw([fmpq_poly([c]) for c in self.coeffs], self.base, self.step,
                               self.trunc, True)

    def _common(self, other: "HalfSeries"):
        mu = self.mu or other.mu
        a = self.with_mu() if mu else self
        b = other.with_mu() if mu else other
        step = 2 if (a.step == 2 and b.step == 2 and a.base % 2 == 0 and b.base % 2 == 0) else 1
        return a, b, step, mu

    # ------------------------------------------------------------ ring ops
    def __add__(self, other):
        if not isinstance(other, HalfSeries):
            other = HalfSeries([other], base=0, step=2, trunc=self.trunc, mu=self.mu)
        a, b, step, mu = self._common(other)
        base = min(a.base, b.base)
        trunc = min(a.trunc, b.trunc)
        ra = a.regrid(base, step).truncate(trunc)
        rb = b.regrid(base, step).truncate(trunc)
        n = max(0, -((base - trunc) // step))
        out = [ra.coeffs[i] + rb.coeffs[i] for i in range(n)]
        return HalfSeries._raw(out, base, step, trunc, mu)

    __radd__ = __add__

    def __neg__(self):
        return HalfSeries._raw([-c for c in self.coeffs], self.base, self.step, self.trunc, self.mu)

    def __sub__(self, other):
        if not isinstance(other, HalfSeries):
            other = HalfSeries([other], base=0, step=2, trunc=self.trunc, mu=self.mu)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "HalfSeries":
        mu = self.mu or isinstance(c, fmpq_poly)
        s = self.with_mu() if mu else self
        c = c if isinstance(c, fmpq_poly) else rat(c)
        return HalfSeries._raw([x * c for x in s.coeffs], s.base, s.step, s.trunc, mu)

    def __mul__(self, other):
        if not isinstance(other, HalfSeries):
            return self.scale(other)
        a, b, step, mu = self._common(other)
        base = a.base + b.base
        trunc = min(a.base + b.trunc, b.base + a.trunc)
        n = max(0, -((base - trunc) // step))
        ca = a.regrid(a.base, step).coeffs
        cb = b.regrid(b.base, step).coeffs
        return HalfSeries._raw(_mul_low(ca, cb, n, mu), base, step, trunc, mu)

    def __rmul__(self, other):
        return self.scale(other)

    def _unit_part(self):
        v = self.valuation()
        if v is None:
            raise DivisionByZeroSeries("series is zero through its truncation")
        step = self.step
        if step == 2 or any(not _is_zero(c) for e, c in self.items() if (e - v) % 2):
            u = self.regrid(v, step)
        else:
            u = self.regrid(v, 2)
        return v, u

    def inverse(self) -> "HalfSeries":
        v, u = self._unit_part()
        n = len(u.coeffs)
        inv = _inv_unit(u.coeffs, n, self.mu)
        return HalfSeries(inv, base=-v, step=u.step, trunc=u.trunc - 2 * v, mu=self.mu)

    def __truediv__(self, other):
        if not isinstance(other, HalfSeries):
            if isinstance(other, fmpq_poly):
                raise TypeError("divide by a lambda polynomial via exact_divide_mu")
            c = rat(other)
            if c == 0:
                raise DivisionByZeroSeries("division by zero scalar")
            return self.scale(1 / c)
        return self * other.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return self.pow_rational(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        if result is None:
            return HalfSeries.one(self.trunc - (self.valuation() or 0), mu=self.mu)
        return result

    def pow_rational(self, p) -> "HalfSeries":
        """self**p for rational p; the leading coefficient must be 1."""
        p = rat(p)
        v, u = self._unit_part()
        c0 = u.coeffs[0]
        if (self.mu and not (c0.degree() == 0 and c0.coeffs()[0] == 1)) or (not self.mu and c0 != 1):
            raise NonUnitLeadingCoefficient("pow_rational needs leading coefficient 1")
        ve = v * p
        if ve.q != 1:
            raise SeriesError("leading exponent times p is not a half-integer")
        ve = int(ve.p)
        a = u.coeffs
        n = len(a)
        g = [fmpq_poly([1]) if self.mu else fmpq(1)]
        for m in range(1, n):
            acc = self.zero_coeff
            for k in range(1, m + 1):
                w = (p + 1) * k - m
                if w != 0 and not _is_zero(a[k]):
                    acc = acc + a[k] * g[m - k] * w
            g.append(acc * fmpq(1, m))
        rel = u.trunc - v
        return HalfSeries(g, base=ve, step=u.step, trunc=ve + rel, mu=self.mu)

    def sqrt(self):
        return self.pow_rational(fmpq(1, 2))

    # ------------------------------------------------------------ calculus
    def derivative(self) -> "HalfSeries":
        out = [c * fmpq(e, 2) if e else c * 0 for e, c in self.items()]
        return HalfSeries._raw(out, self.base - 2, self.step, self.trunc - 2, self.mu)

    def integrate(self) -> "HalfSeries":
        out = []
        for e, c in self.items():
            if e == -2:
                if not _is_zero(c):
                    raise SeriesError("integral of 1/t is logarithmic")
                out.append(c)
            else:
                out.append(c * fmpq(2, e + 2))
        return HalfSeries._raw(out, self.base + 2, self.step, self.trunc + 2, self.mu)

    def shift(self, e_halves: int) -> "HalfSeries":
        """Multiply by t^(e_halves/2)."""
        if e_halves % 2 and self.step == 2:
            return HalfSeries(self.regrid(self.base, 1).coeffs, base=self.base + e_halves, step=1,
                              trunc=self.trunc + e_halves, mu=self.mu)
        return HalfSeries._raw(self.coeffs, self.base + e_halves, self.step, self.trunc + e_halves,
                               self.mu)

    def exp(self) -> "HalfSeries":
        v = self.valuation()
        if v is not None and v <= 0:
            raise SeriesError("exp needs a series with positive valuation")
        step = self.step
        a = self.regrid(0, step)
        n = len(a.coeffs)
        zero = self.zero_coeff
        g = [fmpq_poly([1]) if self.mu else fmpq(1)]
        ka = [a.coeffs[k] * k for k in range(n)]
        nz = [k for k in range(1, n) if not _is_zero(ka[k])]
        for m in range(1, n):
            acc = zero
            for k in nz:
                if k > m:
                    break
                acc = acc + ka[k] * g[m - k]
            g.append(acc * fmpq(1, m))
        return HalfSeries._raw(g, 0, step, self.trunc, self.mu)

    def log_derivative(self) -> "HalfSeries":
        return self.derivative() / self

    def log(self) -> "HalfSeries":
        """log of a series with constant term 1 (constant of integration 0)."""
        v, u = self._unit_part()
        if v != 0:
            raise SeriesError("log needs a series starting at t^0")
        return self.log_derivative().integrate()

    def compose(self, b: "HalfSeries") -> "HalfSeries":
        """self(b(t)) for an integer-step self with nonnegative exponents and
        b of positive valuation."""
        if self.step != 2 or self.base < 0:
            raise SeriesError("compose needs an integer-step power series")
        vb = b.valuation()
        if vb is not None and vb <= 0:
            raise SeriesError("inner series must have positive valuation")
        a = self.regrid(0, 2)
        n = len(a.coeffs)
        trunc = b.trunc if vb is None else min(b.trunc, vb * n)
        out = HalfSeries.zero(trunc, mu=self.mu or b.mu)
        for c in reversed(a.coeffs):
            out = (out * b).truncate(trunc) + HalfSeries([c], trunc=trunc, mu=self.mu)
        return out.truncate(trunc)

    def revert(self) -> "HalfSeries":
        """Compositional inverse of c1 t + c2 t^2 + ... (integer step, c1 != 0),
        via Lagrange inversion."""
        if self.mu:
            raise SeriesError("reversion over Q[mu] is not supported")
        a = self.regrid(0, 2)
        if a.coeffs[0] != 0 or len(a.coeffs) < 2 or a.coeffs[1] == 0:
            raise SeriesError("reversion needs valuation exactly 1")
        n = len(a.coeffs)  # known through t^(n-1)
        phi = HalfSeries(a.coeffs[1:], base=0, step=2, trunc=2 * (n - 1)).inverse()
        out = [fmpq(0)]
        pw = HalfSeries.one(phi.trunc)
        for k in range(1, n):
            pw = pw * phi
            out.append(pw.coeff_t(k - 1) / k)
        return HalfSeries(out, base=0, step=2, trunc=2 * n)

    # ------------------------------------------------------------ mu handling
    def subs_mu(self, mu_value) -> "HalfSeries":
        if not self.mu:
            return self
        m = rat(mu_value)
        return HalfSeries._raw([c(m) for c in self.coeffs], self.base, self.step, self.trunc, False)

    def mu_coefficient(self, n: int) -> "HalfSeries":
        if not self.mu:
            return self if n == 0 else self.scale(0)
        out = []
        for c in self.coeffs:
            cs = c.coeffs()
            out.append(cs[n] if n < len(cs) else _Q0)
        return HalfSeries._raw(out, self.base, self.step, self.trunc, False)

    def mu_degree(self) -> int:
        if not self.mu:
            return 0
        return max((c.degree() for c in self.coeffs), default=-1)

    # ------------------------------------------------------------ comparison
    def agrees(self, other: "HalfSeries", trunc: Optional[int] = None) -> bool:
        """Exact coefficient equality below ``trunc`` (default: common truncation)."""
        if trunc is None:
            trunc = min(self.trunc, other.trunc)
        if trunc > self.trunc or trunc > other.trunc:
            raise SeriesError("comparison beyond truncation")
        d = (self.truncate(trunc) - other.truncate(trunc))
        return d.is_zero()

    def __eq__(self, other):
        if not isinstance(other, HalfSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.agrees(other)

    __hash__ = None

    # ------------------------------------------------------------ numerics
    def evaluate_numeric(self, t0, mu=None):
        """Horner-free direct sum at t0; returns (value, |last included term|)."""
        s = self.subs_mu(mu) if self.mu and mu is not None else self
        if s.mu:
            raise SeriesError("lambda series needs a numeric mu")
        t0 = float(rat_to_float(t0)) if not isinstance(t0, float) else t0
        has_half = any((e % 2) and c != 0 for e, c in s.items())
        if t0 < 0 and has_half:
            raise NegativeArgumentForHalfPower("half powers at negative t")
        total = 0.0
        last = 0.0
        for e, c in s.items():
            if c == 0:
                continue
            if e % 2:
                term = rat_to_float(c) * math.sqrt(t0) ** e
            else:
                term = rat_to_float(c) * t0 ** (e // 2)
            total += term
            last = abs(term)
        return total, last

    # ------------------------------------------------------------ serialization
    def to_json(self) -> dict:
        if self.mu:
            cs = [[rat_str(x) for x in c.coeffs()] for c in self.coeffs]
        else:
            cs = [rat_str(c) for c in self.coeffs]
        return {"base_num_halves": self.base, "step_halves": self.step,
                "coeffs": cs, "trunc_halves": self.trunc}

    @classmethod
    def from_json(cls, d: dict) -> "HalfSeries":
        cs = d["coeffs"]
        mu = any(isinstance(c, list) for c in cs)
        return cls(cs, base=d["base_num_halves"], step=d["step_halves"], trunc=d["trunc_halves"], mu=mu)


def t_series(order: int) -> HalfSeries:
    """The series t, known through t^(order-1)."""
    return HalfSeries([0, 1], base=0, step=2, trunc=2 * order)


def binomial_series(p, order: int, sign: int = -1) -> HalfSeries:
    """(1 + sign*t)^p as an integer-step series through t^(order-1)."""
    p = rat(p)
    out = [fmpq(1)]
    c = fmpq(1)
    for k in range(1, order):
        c = c * (p - k + 1) / k * sign
        out.append(c)
    return HalfSeries(out, base=0, step=2, trunc=2 * order)


def geometric_series(order: int) -> HalfSeries:
    """1/(1-t)."""
    return HalfSeries([1] * order, base=0, step=2, trunc=2 * order)
