"""Exact arithmetic substrate over Q.

Rationals are ``fractions.Fraction``; on top of them this module provides
dense univariate polynomials (:class:`Poly`), rational functions
(:class:`RatFun`) and truncated Laurent series (:class:`LaurentSeries`).
Every value is immutable and every operation is exact: a series always
carries the precision up to which its coefficients are actually known, and
arithmetic propagates the minimum achievable precision.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import MalformedInputError, NotInvertibleError, PrecisionError

Q = Fraction

#: Sentinel precision for series that are exact (polynomials, monomials).
INF = math.inf


def _q(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not a rational value: {value!r}")


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Dense univariate polynomial over Q, coefficients by ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, c, n: int) -> "Poly":
        if n < 0:
            raise ValueError("monomial exponent must be >= 0")
        return cls((0,) * n + (c,))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def ord(self):
        """x-adic valuation; math.inf for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return INF

    def leading(self) -> Fraction:
        if not self.coeffs:
            return Q(0)
        return self.coeffs[-1]

    def coefficient(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Q(0)

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c != 0) == 1

    def terms(self):
        return [(j, c) for j, c in enumerate(self.coeffs) if c != 0]

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Poly) else Poly.const(-_q(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise MalformedInputError("polynomial division by zero")
        quot = [Q(0)] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        rem = list(self.coeffs)
        d, lead = other.degree, other.leading()
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            c = rem[-1] / lead
            k = len(rem) - 1 - d
            quot[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] -= c * oc
            rem.pop()
        return Poly(quot), Poly(rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise MalformedInputError("inexact polynomial division")
        return q

    # -- calculus and substitutions ------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, point) -> Fraction:
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def reflect(self) -> "Poly":
        """p(x) -> p(-x)."""
        return Poly([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def shift_arg(self, a) -> "Poly":
        """p(x) -> p(x + a)."""
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * Poly((a, 1)) + Poly.const(c)
        return out

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly([c / lead for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b).monic() if not (a % b).is_zero() else Poly()
        return a.monic()

    def __repr__(self):
        from .opparse import format_poly

        return f"Poly({format_poly(self)})"


X = Poly((0, 1))
ONE_POLY = Poly((1,))


def rational_roots(p: Poly):
    """All rational roots of ``p`` with multiplicities, plus the rootless part.

    Returns ``(roots, cofactor)`` where ``roots`` is a list of
    ``(root, multiplicity)`` pairs and ``cofactor`` is the (primitive,
    integer-coefficient) factor of ``p`` without rational roots.
    """
    if p.is_zero():
        raise MalformedInputError("zero polynomial has no well-defined roots")
    roots = []
    v = p.ord()
    if v:
        roots.append((Q(0), v))
        p = Poly(p.coeffs[v:])
    # integer-coefficient primitive form
    den = math.lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*(abs(c) for c in ints)) or 1
    ints = [c // g for c in ints]
    work = Poly(ints)
    if work.degree >= 1:
        a0, an = abs(ints[0]), abs(ints[-1])
        cands = set()
        for pnum in _divisors(a0):
            for pden in _divisors(an):
                cands.add(Q(pnum, pden))
                cands.add(Q(-pnum, pden))
        for cand in sorted(cands):
            mult = 0
            while work.degree >= 1 and work.eval(cand) == 0:
                work = work.exact_div(Poly((-cand, 1)))
                mult += 1
            if mult:
                roots.append((cand, mult))
    cofactor = work if work.degree >= 1 else ONE_POLY
    return roots, cofactor


def _divisors(n: int):
    if n == 0:
        return [1]
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


# ---------------------------------------------------------------------------
# rational functions


class RatFun:
    """Quotient of two polynomials in lowest terms, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE_POLY):
        if not isinstance(num, Poly):
            num = Poly.const(_q(num))
        if not isinstance(den, Poly):
            den = Poly.const(_q(den))
        if den.is_zero():
            raise MalformedInputError("zero denominator")
        if num.is_zero():
            den = ONE_POLY
        else:
            g = num.gcd(den)
            if g.degree >= 1:
                num, den = num.exact_div(g), den.exact_div(g)
            lead = den.leading()
            if lead != 1:
                num = num * (1 / lead)
                den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFun is immutable")

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        other = _ratfun(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _ratfun(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        other = _ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _ratfun(other)
        if other is None:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _ratfun(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise NotInvertibleError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _ratfun(other) / self

    def derivative(self) -> "RatFun":
        return RatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, point) -> Fraction:
        d = self.den.eval(point)
        if d == 0:
            raise MalformedInputError(f"pole at {point}")
        return self.num.eval(point) / d

    def __repr__(self):
        from .opparse import format_poly

        if self.den == ONE_POLY:
            return f"RatFun({format_poly(self.num)})"
        return f"RatFun(({format_poly(self.num)})/({format_poly(self.den)}))"


def _ratfun(value):
    if isinstance(value, RatFun):
        return value
    if isinstance(value, Poly):
        return RatFun(value)
    if isinstance(value, (int, Fraction)):
        return RatFun(Poly.const(value))
    return None


# ---------------------------------------------------------------------------
# truncated Laurent series


class LaurentSeries:
    """Truncated Laurent series over Q.

    ``coeffs[i]`` is the coefficient of ``x**(valuation + i)``; coefficients
    are known exactly for all exponents ``< precision`` (and are zero below
    ``valuation``).  The zero-to-precision series is normalized to an empty
    coefficient tuple with ``valuation == precision``.
    """

    __slots__ = ("valuation", "coeffs", "precision")

    def __init__(self, valuation, coeffs, precision):
        if isinstance(precision, float):
            if not math.isinf(precision):
                raise TypeError("precision must be an integer or INF")
            precision = INF
        cs = [_q(c) for c in coeffs]
        if precision != INF and len(cs) > precision - valuation:
            cs = cs[: precision - valuation]
        while cs and cs[0] == 0:
            cs.pop(0)
            valuation += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            valuation = precision
        if precision != INF and valuation > precision:
            raise PrecisionError("series valuation beyond its precision")
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, precision=INF):
        return cls(precision, (), precision)

    @classmethod
    def one(cls, precision=INF):
        return cls(0, (1,), precision)

    @classmethod
    def monomial(cls, c, n: int, precision=INF):
        return cls(n, (c,), precision)

    @classmethod
    def from_poly(cls, p: Poly, precision=INF):
        return cls(0, p.coeffs, precision)

    @classmethod
    def from_coeffs(cls, coeffs, valuation=0, precision=None):
        if precision is None:
            precision = valuation + len(list(coeffs))
        return cls(valuation, coeffs, precision)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def has_information(self) -> bool:
        return self.precision == INF or self.precision > self.valuation or self.coeffs

    def coefficient(self, n: int) -> Fraction:
        if self.precision != INF and n >= self.precision:
            raise PrecisionError(f"coefficient of x^{n} beyond precision {self.precision}")
        i = n - self.valuation
        if self.coeffs and 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Q(0)

    def coefficients(self, start: int, stop: int):
        return [self.coefficient(n) for n in range(start, stop)]

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.valuation == other.valuation
            and self.coeffs == other.coeffs
            and self.precision == other.precision
        )

    def __hash__(self):
        return hash((self.valuation, self.coeffs, self.precision))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality of all coefficients up to the common precision."""
        prec = min(self.precision, other.precision)
        lo = min(self.valuation, other.valuation)
        if prec != INF:
            lo = min(lo, prec)
            return all(self.coefficient(n) == other.coefficient(n) for n in range(lo, prec))
        return self.valuation == other.valuation and self.coeffs == other.coeffs

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.monomial(other, 0)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        prec = min(self.precision, other.precision)
        sides = [s for s in (self, other) if s.coeffs]
        if not sides:
            return LaurentSeries.zero(prec)
        lo = min(s.valuation for s in sides)
        if prec != INF:
            lo = min(lo, prec)
            hi = prec
        else:
            hi = max(s.valuation + len(s.coeffs) for s in sides)
        cs = [
            sum((s.coefficient(n) for s in sides if n >= s.valuation), Q(0))
            for n in range(lo, hi)
        ]
        return LaurentSeries(lo, cs, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.valuation, [-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.monomial(other, 0)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        c = _q(c)
        if c == 0:
            prec = self.precision
            return LaurentSeries.zero(prec)
        return LaurentSeries(self.valuation, [c * a for a in self.coeffs], self.precision)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Poly):
            other = LaurentSeries.from_poly(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        prec = min(self.precision + other.valuation, other.precision + self.valuation)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(prec)
        val = self.valuation + other.valuation
        if prec == INF:
            length = len(self.coeffs) + len(other.coeffs) - 1
        else:
            length = prec - val
        out = [Q(0)] * max(0, length)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= length:
                    break
                if b != 0:
                    out[i + j] += a * b
        return LaurentSeries(val, out, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x**k."""
        return LaurentSeries(self.valuation + k, self.coeffs, self.precision + k)

    def truncate(self, precision) -> "LaurentSeries":
        if precision > self.precision:
            raise PrecisionError("cannot raise precision by truncation")
        return LaurentSeries(self.valuation, self.coeffs, precision)

    def differentiate(self) -> "LaurentSeries":
        cs = []
        for i, c in enumerate(self.coeffs):
            n = self.valuation + i
            cs.append(n * c)
        return LaurentSeries(self.valuation - 1, cs, self.precision - 1)

    def reflect(self) -> "LaurentSeries":
        """x -> -x."""
        cs = [
            c if (self.valuation + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)
        ]
        return LaurentSeries(self.valuation, cs, self.precision)

    def invert(self, precision=None) -> "LaurentSeries":
        """Multiplicative inverse, to ``precision`` known coefficients."""
        if self.is_zero():
            raise NotInvertibleError("cannot invert the zero series")
        v = self.valuation
        unit = self.coeffs
        if precision is None:
            if self.precision == INF:
                raise PrecisionError("specify a precision to invert an exact series")
            precision = self.precision - 2 * v
        length = precision + v  # number of unit-part coefficients
        if self.precision != INF:
            length = min(length, self.precision - v)
        if length <= 0:
            raise PrecisionError("no known coefficients for series inversion")
        c0 = unit[0]
        inv = [1 / c0]
        for n in range(1, length):
            acc = Q(0)
            for i in range(1, min(n, len(unit) - 1) + 1):
                acc += unit[i] * inv[n - i]
            inv.append(-acc / c0)
        return LaurentSeries(-v, inv, -v + length)

    def divide(self, other: "LaurentSeries", precision=None) -> "LaurentSeries":
        if precision is None:
            return self * other.invert()
        return self * other.invert(precision)

    def __repr__(self):
        if self.is_zero():
            return f"LaurentSeries(0; O(x^{self.precision}))"
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c:
                terms.append(f"{c}*x^{self.valuation + i}")
        tail = " + ..." if len(self.coeffs) > 8 else ""
        return f"LaurentSeries({' + '.join(terms)}{tail}; O(x^{self.precision}))"


# ---------------------------------------------------------------------------
# module operations


def series_expand(f: RatFun, at: str, order: int) -> LaurentSeries:
    """Laurent expansion of ``f`` at 0, or at infinity in w = 1/x.

    The result is exact to precision ``order`` (all coefficients of
    exponents below ``order`` are known).
    """
    if at not in ("zero", "infinity"):
        raise ValueError("at must be 'zero' or 'infinity'")
    if f.den.is_zero():
        raise MalformedInputError("zero denominator polynomial")
    if at == "infinity":
        dn, dd = f.num.degree, f.den.degree
        num = Poly(tuple(reversed(f.num.coeffs)))
        den = Poly(tuple(reversed(f.den.coeffs)))
        g = RatFun(num, den)
        base = _expand_at_zero(g, order - (dd - dn))
        return base.shift(dd - dn)
    return _expand_at_zero(f, order)


def _expand_at_zero(f: RatFun, order) -> LaurentSeries:
    if f.is_zero():
        return LaurentSeries.zero(order)
    vn, vd = f.num.ord(), f.den.ord()
    val = vn - vd
    length = order - val
    if length <= 0:
        return LaurentSeries.zero(order)
    num = f.num.coeffs[vn:]
    den = f.den.coeffs[vd:]
    d0 = den[0]
    out = []
    for n in range(length):
        acc = num[n] if n < len(num) else Q(0)
        for i in range(1, min(n, len(den) - 1) + 1):
            acc -= den[i] * out[n - i]
        out.append(acc / d0)
    return LaurentSeries(val, out, order)


def pochhammer(alpha, n: int) -> Fraction:
    """Rising factorial alpha (alpha+1) ... (alpha+n-1); empty product is 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    alpha = _q(alpha)
    out = Q(1)
    for i in range(n):
        out *= alpha + i
    return out
