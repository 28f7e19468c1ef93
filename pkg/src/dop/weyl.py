"""The noncommutative algebra Q[x, D] with D = d/dx.

Operators are kept in canonical form sum_i a_i(x) D^i with polynomial
coefficients (all x-powers to the left of all D-powers).  Besides the ring
structure this module implements the adjoint, the substitutions x -> -x and
x -> 1/x, the Fourier automorphism x -> D, D -> -x, and the application of
operators to truncated log-exp series f(x) x^a (ln x)^k exp(d/x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import MalformedInputError, PrecisionError
from .exact import INF, LaurentSeries, Poly, Q, _q

_BINOM_CACHE: dict = {}


def _binom(n: int, k: int) -> int:
    key = (n, k)
    if key not in _BINOM_CACHE:
        _BINOM_CACHE[key] = math.comb(n, k)
    return _BINOM_CACHE[key]


class DiffOp:
    """Differential operator sum_i a_i(x) D^i with Poly coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if isinstance(c, Poly) else Poly.const(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def from_monomial(cls, c, j: int, i: int) -> "DiffOp":
        """c * x^j * D^i."""
        return cls([Poly()] * i + [Poly.monomial(c, j)])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order(self) -> int:
        """Order in D; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def coefficient(self, i: int) -> Poly:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Poly()

    def leading(self) -> Poly:
        if self.is_zero():
            raise MalformedInputError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def monomials(self):
        """All (i, j, c) with nonzero coefficient c of x^j D^i."""
        out = []
        for i, p in enumerate(self.coeffs):
            for j, c in p.terms():
                out.append((i, j, c))
        return out

    def max_coeff_degree(self) -> int:
        return max((p.degree for p in self.coeffs), default=-1)

    # -- ring structure ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = DiffOp((other,))
        if not isinstance(other, DiffOp):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coefficient(i) + other.coefficient(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return DiffOp([-p for p in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = DiffOp((other,))
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return DiffOp([p * other for p in self.coeffs])
        if isinstance(other, DiffOp):
            return compose(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return DiffOp([p * other for p in self.coeffs])
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative operator power")
        out = DiffOp((Poly.const(1),))
        for _ in range(n):
            out = compose(out, self)
        return out

    def __repr__(self):
        from .opparse import format_operator

        return f"DiffOp({format_operator(self)})"


#: Generators of the algebra.
D = DiffOp((Poly(), Poly.const(1)))
x_op = DiffOp((Poly((0, 1)),))


def compose(phi: DiffOp, psi: DiffOp) -> DiffOp:
    """Operator product phi o psi, canonicalized via D^i b = sum C(i,t) b^(t) D^(i-t)."""
    out = [Poly() for _ in range(len(phi.coeffs) + len(psi.coeffs))]
    for i, a in enumerate(phi.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(psi.coeffs):
            if b.is_zero():
                continue
            deriv = b
            for t in range(i + 1):
                if deriv.is_zero():
                    break
                out[i - t + j] = out[i - t + j] + a * deriv * _binom(i, t)
                deriv = deriv.derivative()
    return DiffOp(out)


def adjoint(phi: DiffOp) -> DiffOp:
    """Formal adjoint sum_i (-D)^i o a_i."""
    out = [Poly() for _ in range(len(phi.coeffs) + 1)]
    for i, a in enumerate(phi.coeffs):
        if a.is_zero():
            continue
        sign = 1 if i % 2 == 0 else -1
        deriv = a
        for t in range(i + 1):
            if deriv.is_zero():
                break
            out[i - t] = out[i - t] + deriv * (sign * _binom(i, t))
            deriv = deriv.derivative()
    return DiffOp(out)


def reflect(phi: DiffOp) -> DiffOp:
    """Change of variable x -> -x: a_i(x) D^i -> a_i(-x) (-1)^i D^i."""
    return DiffOp(
        [p.reflect() * (1 if i % 2 == 0 else -1) for i, p in enumerate(phi.coeffs)]
    )


class ChartImage(NamedTuple):
    """Result of x -> 1/w: ``op`` equals w^cleared times the raw image."""

    op: DiffOp
    cleared: int


def invert_chart(phi: DiffOp) -> ChartImage:
    """Change of variable x -> 1/w (so D_x -> -w^2 D_w).

    Denominators in w are cleared by the minimal power of w, which is
    recorded in the ``cleared`` field; no common w factor is removed.
    """
    if phi.is_zero():
        return ChartImage(phi, 0)
    # rows[i] maps w-exponent -> coefficient of D_w^i, exponents may be negative
    rows: list[dict] = [{} for _ in range(phi.order + 1)]

    def _accumulate(i, e, c):
        if c:
            rows[i][e] = rows[i].get(e, Q(0)) + c

    # (-w^2 D)^i, built by left-composition with -w^2 D
    power: dict = {(0, 0): Q(1)}  # (d-power, w-exponent) -> coeff
    for i, a in enumerate(phi.coeffs):
        if not a.is_zero():
            for (t, e), c in power.items():
                for j, aj in a.terms():
                    _accumulate(t, e - j, c * aj)
        nxt: dict = {}
        for (t, e), c in power.items():
            # (-w^2 D) o (c w^e D^t) = -c e w^(e+1) D^t - c w^(e+2) D^(t+1)
            if e:
                nxt[(t, e + 1)] = nxt.get((t, e + 1), Q(0)) - c * e
            nxt[(t + 1, e + 2)] = nxt.get((t + 1, e + 2), Q(0)) - c
        power = nxt
    emin = min((e for row in rows for e, c in row.items() if c), default=0)
    cleared = max(0, -emin)
    polys = []
    for row in rows:
        live = {e: c for e, c in row.items() if c}
        if not live:
            polys.append(Poly())
            continue
        cs = [Q(0)] * (max(live) + cleared + 1)
        for e, c in live.items():
            cs[e + cleared] = c
        polys.append(Poly(cs))
    return ChartImage(DiffOp(polys), cleared)


def fourier(phi: DiffOp, direction: str = "forward") -> DiffOp:
    """Fourier automorphism x -> D, D -> -x (or its inverse x -> -D, D -> x)."""
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    out = [Poly() for _ in range(phi.order + phi.max_coeff_degree() + 2)]
    for i, j, c in phi.monomials():
        # forward: x^j D^i -> D^j (-x)^i; inverse: -> (-D)^j x^i
        if direction == "forward":
            sign = -1 if i % 2 else 1
        else:
            sign = -1 if j % 2 else 1
        # D^j o x^i = sum_t C(j,t) i!/(i-t)! x^(i-t) D^(j-t)
        for t in range(min(i, j) + 1):
            fall = 1
            for s in range(t):
                fall *= i - s
            out[j - t] = out[j - t] + Poly.monomial(c * sign * _binom(j, t) * fall, i - t)
    return DiffOp(out)


# ---------------------------------------------------------------------------
# log-exp series


@dataclass(frozen=True)
class LogExpTerm:
    """One term series(x) * x^alpha * (ln x)^k * exp(delta/x).

    All quantities are in the local variable of the chart the containing
    :class:`LogExpSeries` lives in.
    """

    series: LaurentSeries
    alpha: Fraction = Q(0)
    k: int = 0
    delta: Fraction = Q(0)

    def __post_init__(self):
        if self.k < 0:
            raise MalformedInputError("negative log power")

    def key(self):
        frac = self.alpha - math.floor(self.alpha)
        return (frac, self.k, self.delta)


@dataclass(frozen=True)
class LogExpSeries:
    """Finite sum of :class:`LogExpTerm`, canonical under key merging.

    After merging no two terms share the same (alpha mod 1, k, delta) key;
    integer shifts of alpha are folded into the series part.
    """

    terms: tuple
    chart: str = "zero"

    @classmethod
    def build(cls, terms, chart="zero") -> "LogExpSeries":
        merged: dict = {}
        for t in terms:
            frac, k, delta = t.key()
            shift = int(t.alpha - frac)
            s = t.series.shift(shift)
            if (frac, k, delta) in merged:
                merged[(frac, k, delta)] = merged[(frac, k, delta)] + s
            else:
                merged[(frac, k, delta)] = s
        out = []
        for (frac, k, delta), s in sorted(merged.items()):
            if s.is_zero() and s.precision == INF:
                continue
            out.append(LogExpTerm(s, frac, k, delta))
        return cls(tuple(out), chart)

    @classmethod
    def from_series(cls, series: LaurentSeries, chart="zero") -> "LogExpSeries":
        return cls.build([LogExpTerm(series)], chart)

    def is_zero(self) -> bool:
        return all(t.series.is_zero() for t in self.terms)

    def min_precision(self):
        return min((t.series.precision for t in self.terms), default=INF)

    def __add__(self, other: "LogExpSeries") -> "LogExpSeries":
        if self.chart != other.chart:
            raise MalformedInputError("cannot add series from different charts")
        return LogExpSeries.build(self.terms + other.terms, self.chart)

    def __neg__(self):
        return LogExpSeries(
            tuple(
                LogExpTerm(-t.series, t.alpha, t.k, t.delta) for t in self.terms
            ),
            self.chart,
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LogExpSeries":
        return LogExpSeries(
            tuple(
                LogExpTerm(t.series.scale(c), t.alpha, t.k, t.delta) for t in self.terms
            ),
            self.chart,
        )

    def __mul__(self, other: "LogExpSeries") -> "LogExpSeries":
        if not isinstance(other, LogExpSeries):
            return NotImplemented
        if self.chart != other.chart:
            raise MalformedInputError("cannot multiply series from different charts")
        terms = []
        for t1 in self.terms:
            for t2 in other.terms:
                terms.append(
                    LogExpTerm(
                        t1.series * t2.series,
                        t1.alpha + t2.alpha,
                        t1.k + t2.k,
                        t1.delta + t2.delta,
                    )
                )
        return LogExpSeries.build(terms, self.chart)

    def single_term(self) -> LogExpTerm:
        """The unique nonzero term, for division purposes."""
        nz = [t for t in self.terms if not t.series.is_zero()]
        if len(nz) != 1:
            raise MalformedInputError("series is not a single log-free term")
        return nz[0]

    def divide_single(self, other: "LogExpSeries", precision=None) -> "LogExpSeries":
        """Divide by a series that reduces to one log-free exp-power term."""
        t = other.single_term()
        if t.k:
            raise MalformedInputError("cannot divide by a logarithmic term")
        inv = t.series.invert(precision)
        return LogExpSeries.build(
            [
                LogExpTerm(s.series * inv, s.alpha - t.alpha, s.k, s.delta - t.delta)
                for s in self.terms
            ],
            self.chart,
        )

    def agrees_with(self, other: "LogExpSeries") -> bool:
        return (self - other).is_zero()


def differentiate_logexp(s: LogExpSeries) -> LogExpSeries:
    """d/dx of a log-exp series, exact truncation bookkeeping included."""
    terms = []
    for t in s.terms:
        main = t.series.differentiate()
        if t.alpha:
            main = main + t.series.shift(-1).scale(t.alpha)
        if t.delta:
            main = main - t.series.shift(-2).scale(t.delta)
        terms.append(LogExpTerm(main, t.alpha, t.k, t.delta))
        if t.k:
            terms.append(LogExpTerm(t.series.shift(-1).scale(t.k), t.alpha, t.k - 1, t.delta))
    return LogExpSeries.build(terms, s.chart)


def apply(phi: DiffOp, s: LogExpSeries) -> LogExpSeries:
    """Apply an operator to a log-exp series in the same chart variable.

    Raises :class:`PrecisionError` when the result would retain no valid
    coefficient in some term.
    """
    acc = LogExpSeries((), s.chart)
    current = s
    for i, a in enumerate(phi.coeffs):
        if not a.is_zero():
            terms = [
                LogExpTerm(t.series * a, t.alpha, t.k, t.delta) for t in current.terms
            ]
            acc = acc + LogExpSeries.build(terms, s.chart)
        if i < phi.order:
            current = differentiate_logexp(current)
    # underflow: the result knows nothing at or above where the input began
    in_vals = [t.series.valuation for t in s.terms if t.series.coeffs]
    out_prec = acc.min_precision()
    if in_vals and out_prec != INF and out_prec <= min(in_vals):
        raise PrecisionError("insufficient input precision for apply()")
    return acc


def exp_term(delta, alpha=0, k=0, precision=INF, chart="zero") -> LogExpSeries:
    """Convenience builder for a single unit term x^alpha (ln x)^k exp(delta/x)."""
    return LogExpSeries.build(
        [LogExpTerm(LaurentSeries.one(precision), _q(alpha), k, _q(delta))], chart
    )
