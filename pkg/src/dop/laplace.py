"""Formal Laplace calculus for monomials x^a (ln x)^k and series.

Transcendental constants are never evaluated: every constant lives in the
free module spanned by derivatives Gamma^(j)(b) of the Gamma function at a
canonical base argument b (the representative of the argument modulo 1 in
(0, 1), or 1 on the integer orbit, where Gamma(1) = 1 folds into the
rational part).  The argument-shift rules

    Gamma(b+1) = b Gamma(b),   Gamma^(j)(b+1) = b Gamma^(j)(b) + j Gamma^(j-1)(b)

are applied as a confluent reduction, so identities hold exactly.

For negative integer powers the transform is extended through the finite
parts of the divergent primitives; the extension used here is normalized
so that the leading log coefficient of the transform of x^(-1) is +1 (it
is -1 for the classical finite part; the two differ by an overall sign on
the negative-integer branch).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    MalformedInputError,
    TransportPoleError,
    UnsupportedTermError,
)
from .exact import INF, LaurentSeries, Q, _q, pochhammer
from .weyl import LogExpSeries, LogExpTerm

# ---------------------------------------------------------------------------
# symbolic Gamma-derivative vectors


def _parity(n) -> int:
    return -1 if int(n) % 2 else 1


@dataclass(frozen=True)
class GammaVector:
    """Element rational + sum_j coords[j] * Gamma^(j)(base)."""

    base: Fraction | None
    coords: tuple  # ((j, coefficient), ...) sorted by j, coefficients nonzero
    rational: Fraction = Q(0)

    @classmethod
    def of_rational(cls, c) -> "GammaVector":
        return cls(None, (), _q(c))

    def is_zero(self) -> bool:
        return not self.coords and self.rational == 0

    def is_rational(self) -> bool:
        return not self.coords

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise MalformedInputError("GammaVector is not rational")
        return self.rational

    def tokens(self):
        out = {}
        if self.rational:
            out[("1",)] = self.rational
        for j, c in self.coords:
            out[("g", self.base, j)] = c
        return out

    def scale(self, c) -> "GammaVector":
        c = _q(c)
        if c == 0:
            return GammaVector.of_rational(0)
        return GammaVector(
            self.base, tuple((j, c * v) for j, v in self.coords), c * self.rational
        )

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "GammaVector") -> "GammaVector":
        if not isinstance(other, GammaVector):
            return NotImplemented
        if self.base is not None and other.base is not None and self.base != other.base:
            raise MalformedInputError("GammaVectors live at different base arguments")
        base = self.base if self.base is not None else other.base
        acc = dict(self.coords)
        for j, c in other.coords:
            acc[j] = acc.get(j, Q(0)) + c
        coords = tuple(sorted((j, c) for j, c in acc.items() if c != 0))
        return GammaVector(base if coords else None, coords, self.rational + other.rational)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, GammaVector):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.base, self.coords, self.rational))

    def try_ratio(self, other: "GammaVector"):
        """self / other when proportional, else None."""
        for cand in set(
            [
                (v / w)
                for (j, v), (i, w) in zip(self.coords, other.coords)
                if i == j and w
            ]
            + ([self.rational / other.rational] if other.rational else [])
        ):
            if (self - other.scale(cand)).is_zero():
                return cand
        return None

    def to_json(self):
        return {
            "base": None if self.base is None else str(self.base),
            "rational": str(self.rational),
            "coords": {str(j): str(c) for j, c in self.coords},
        }


_GAMMA_CACHE: dict = {}


def gamma_derivative(argument, j: int = 0) -> GammaVector:
    """Gamma^(j)(argument) reduced to the canonical base argument."""
    argument = _q(argument)
    if argument.denominator == 1 and argument <= 0:
        raise MalformedInputError(f"Gamma derivative at nonpositive integer {argument}")
    key = (argument, j)
    if key in _GAMMA_CACHE:
        return _GAMMA_CACHE[key]
    if argument.denominator == 1:
        target = Q(1)
    else:
        target = argument - math.floor(argument)
    if argument == target:
        if target == 1 and j == 0:
            out = GammaVector.of_rational(1)
        else:
            out = GammaVector(target, ((j, Q(1)),), Q(0))
    elif argument > target:
        a = argument - 1
        out = gamma_derivative(a, j).scale(a)
        if j:
            out = out + gamma_derivative(a, j - 1).scale(j)
    else:
        out = gamma_derivative(argument + 1, j)
        if j:
            out = out - gamma_derivative(argument, j - 1).scale(j)
        out = out.scale(Q(1) / argument)
    _GAMMA_CACHE[key] = out
    return out


def log_coefficient(alpha, k: int, j: int) -> GammaVector:
    """Coefficient of (ln z)^j in the transform of x^alpha (ln x)^k, alpha generic.

    Equals C(k, j) (-1)^j Gamma^(k-j)(alpha+1); the normalized form
    rho^(k)_{alpha,j} is this divided by Gamma(alpha+1), with top value
    rho^(k)_{alpha,k} = (-1)^k.
    """
    return gamma_derivative(_q(alpha) + 1, k - j).scale(_parity(j) * math.comb(k, j))


# ---------------------------------------------------------------------------
# transform results


@dataclass(frozen=True)
class LaplaceResult:
    """Transform value z^power * sum_j (sum_i c_i h_i(1/z)) (ln z)^j.

    ``logs`` maps the log power j to components (constant, series in the
    reciprocal variable w = 1/z).
    """

    power: Fraction
    branch: str
    logs: tuple  # ((j, ((GammaVector, LaurentSeries), ...)), ...)

    @classmethod
    def build(cls, power, branch, logmap) -> "LaplaceResult":
        logs = []
        for j in sorted(logmap):
            comps = tuple(
                (c, s) for c, s in logmap[j] if not c.is_zero() and s.has_information()
            )
            if comps:
                logs.append((j, comps))
        return cls(_q(power), branch, tuple(logs))

    def logmap(self):
        return {j: list(comps) for j, comps in self.logs}

    def log_powers(self):
        return [j for j, _ in self.logs]

    def collect(self):
        """Map (j, constant-token) -> merged rational series."""
        out: dict = {}
        for j, comps in self.logs:
            for c, s in comps:
                for token, coef in c.tokens().items():
                    key = (j, token)
                    term = s.scale(coef)
                    out[key] = out.get(key) + term if key in out else term
        return {k: v for k, v in out.items() if not (v.is_zero() and v.precision == INF)}

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.collect().values())

    def scale(self, c) -> "LaplaceResult":
        logmap = {
            j: [(gv.scale(c), s) for gv, s in comps] for j, comps in self.logs
        }
        return LaplaceResult.build(self.power, self.branch, logmap)

    def times_z(self, m: int = 1) -> "LaplaceResult":
        return LaplaceResult(self.power + m, self.branch, self.logs)

    def __add__(self, other: "LaplaceResult") -> "LaplaceResult":
        if not isinstance(other, LaplaceResult):
            return NotImplemented
        if self.power != other.power:
            raise MalformedInputError("cannot add transforms with different prefactors")
        logmap = self.logmap()
        for j, comps in other.logs:
            logmap.setdefault(j, []).extend(comps)
        branch = self.branch if self.branch == other.branch else "mixed"
        return LaplaceResult.build(self.power, branch, logmap)

    def __sub__(self, other):
        return self + other.scale(-1)

    def derivative(self) -> "LaplaceResult":
        """d/dz, staying inside the z^power (ln z)^j w-series calculus."""
        logmap: dict = {}
        for j, comps in self.logs:
            for c, s in comps:
                main = s.scale(self.power) - s.differentiate().shift(1)
                logmap.setdefault(j, []).append((c, main))
                if j:
                    logmap.setdefault(j - 1, []).append((c.scale(j), s))
        return LaplaceResult.build(self.power - 1, self.branch, logmap)

    def agrees_with(self, other: "LaplaceResult") -> bool:
        """Semantic equality; prefactor powers are aligned before comparing."""
        shift = self.power - other.power
        if shift.denominator != 1:
            return self.is_zero() and other.is_zero()
        mine, theirs = self.collect(), other.collect()
        for key in set(mine) | set(theirs):
            a = mine.get(key)
            b = theirs.get(key)
            if b is not None:
                b = b.shift(int(shift))
            if a is None:
                a = LaurentSeries.zero(b.precision)
            if b is None:
                b = LaurentSeries.zero(a.precision)
            if not a.agrees_with(b):
                return False
        return True

    def top_series(self) -> LaurentSeries:
        """Series of the highest log power (single component expected)."""
        j = max(self.log_powers())
        comps = dict(self.logs)[j]
        if len(comps) != 1:
            raise MalformedInputError("top log layer is not a single component")
        return comps[0][1]

    def to_json(self):
        return {
            "power": str(self.power),
            "branch": self.branch,
            "logs": [
                {
                    "log_power": j,
                    "components": [
                        {"constant": c.to_json(), "series": _series_json(s)}
                        for c, s in comps
                    ],
                }
                for j, comps in self.logs
            ],
        }


def _series_json(s: LaurentSeries):
    return {
        "valuation": s.valuation if s.coeffs else 0,
        "prec": None if s.precision == INF else s.precision,
        "coeffs": [str(c) for c in s.coeffs],
    }


# ---------------------------------------------------------------------------
# finite parts


def _finite_part_terms(alpha: Fraction, k: int, n: int):
    """Closed form of p.f. int_0^x (x-t)^n/n! t^alpha (ln t)^k dt.

    Returns [(coefficient, power, logpower)]; the power is alpha + n + 1
    throughout, with an extra (ln x)^(k+1) term on the resonant branch
    -alpha-1 in {0..n}.
    """
    special = alpha.denominator == 1 and 0 <= -int(alpha) - 1 <= n
    terms = []
    for m in range(n + 1):
        if special and m == -int(alpha) - 1:
            continue
        base = Q(_parity(m), math.factorial(m) * math.factorial(n - m)) / (m + alpha + 1)
        for ell in range(k + 1):
            c = (
                base
                * Q(math.factorial(k), math.factorial(ell))
                * _parity(k - ell)
                / (m + alpha + 1) ** (k - ell)
            )
            terms.append((c, alpha + n + 1, ell))
    if special:
        c = Q(
            _parity(int(alpha) + 1),
            math.factorial(-int(alpha) - 1) * math.factorial(n + int(alpha) + 1),
        ) / (k + 1)
        terms.append((c, alpha + n + 1, k + 1))
    return terms


def finite_part_primitive(alpha, k: int, n: int, order: int) -> LogExpSeries:
    """F_n(x) = p.f. int_0^x (x-t)^n/n! t^alpha (ln t)^k dt as a log-exp series."""
    alpha = _q(alpha)
    if k < 0 or n < 0:
        raise MalformedInputError("k and n must be >= 0")
    terms = [
        LogExpTerm(LaurentSeries.monomial(c, 0, order), power, ell, Q(0))
        for c, power, ell in _finite_part_terms(alpha, k, n)
    ]
    return LogExpSeries.build(terms, "zero")


# ---------------------------------------------------------------------------
# monomial transform


def laplace_monomial(alpha, k: int = 0) -> LaplaceResult:
    """Transform of x^alpha (ln x)^k.

    Generic branch: Gamma(alpha+1) z^(-alpha-1) times a log polynomial with
    top normalized coefficient rho^(k)_{alpha,k} = (-1)^k.  For alpha a
    negative integer the finite-part extension is used, normalized so that
    the top log coefficient is (-1)^(alpha+1)/((k+1)(-alpha-1)!).
    """
    alpha = _q(alpha)
    if k < 0:
        raise MalformedInputError("negative log power")
    if alpha.denominator == 1 and alpha < 0:
        return _laplace_negative_monomial(int(alpha), k)
    one = LaurentSeries.one()
    logmap = {j: [(log_coefficient(alpha, k, j), one)] for j in range(k + 1)}
    return LaplaceResult.build(-alpha - 1, "generic", logmap)


def _laplace_negative_monomial(alpha: int, k: int) -> LaplaceResult:
    n = -alpha - 1
    logmap: dict = {}
    one = LaurentSeries.one()
    for c, power, ell in _finite_part_terms(Q(alpha), k, n):
        # the finite part has power 0 here; its transform sits at z^-1
        for j in range(ell + 1):
            logmap.setdefault(j, []).append((log_coefficient(Q(0), ell, j).scale(-c), one))
    return LaplaceResult.build(Q(n), "negative-integer", logmap)


# ---------------------------------------------------------------------------
# shift transport


@dataclass(frozen=True)
class TransportTable:
    """Rational transport r^(k,l)_{alpha+n,j} for the normalized coefficients.

    rho^(k)_{alpha+n,j} = sum_{l=j}^{k} rho^(k)_{alpha,l} r^(k,l)_{alpha+n,j};
    the n = 0 layer is the identity and r^(k,l)_{alpha+n,l} = 1 for all n.
    """

    alpha: Fraction
    k: int
    N: int
    values: tuple  # values[n][j][l]

    def r(self, j: int, ell: int, n: int) -> Fraction:
        return self.values[n][j][ell]


def transport(alpha, k: int, N: int) -> TransportTable:
    """Exact transport table from the one-step shift recurrence

    rho^(k)_{alpha+1,j} = rho^(k)_{alpha,j} - (j+1)/(alpha+1) rho^(k)_{alpha,j+1}.
    """
    alpha = _q(alpha)
    for i in range(N):
        if alpha + i + 1 == 0:
            raise TransportPoleError(f"transport pole at shift {i} (alpha + {i} + 1 = 0)")
    layer = [[Q(1) if ell == j else Q(0) for ell in range(k + 1)] for j in range(k + 1)]
    values = [tuple(tuple(row) for row in layer)]
    for n in range(N):
        den = alpha + n + 1
        nxt = []
        for j in range(k + 1):
            row = list(layer[j])
            if j + 1 <= k:
                for ell in range(k + 1):
                    row[ell] -= Q(j + 1, 1) / den * layer[j + 1][ell]
            nxt.append(row)
        layer = nxt
        values.append(tuple(tuple(row) for row in layer))
    return TransportTable(alpha, k, N, tuple(values))


# ---------------------------------------------------------------------------
# series transform


def laplace_series(f: LaurentSeries, alpha, k: int = 0, order: int = 64) -> LaplaceResult:
    """Transform of f(x) x^alpha (ln x)^k for a power series f.

    Component form: z^(-alpha-1) sum_j [sum_l C_l(alpha) H_{j,l}(1/z)] (ln z)^j
    with rational series H_{j,l}(w) = sum_n a_n (alpha+1)_n r^(k,l)_{alpha+n,j} w^n
    and exact Gamma-span constants C_l; negative integer alpha goes through
    the head/tail split at the monomial branch.
    """
    alpha = _q(alpha)
    if f.coeffs and f.valuation < 0:
        raise MalformedInputError("laplace_series needs a power series (valuation >= 0)")
    if alpha.denominator == 1 and alpha < 0:
        return _laplace_series_negative(f, int(alpha), k, order)
    limit = order if f.precision == INF else min(order, f.precision)
    if limit <= 0:
        raise MalformedInputError("no known coefficients to transform")
    table = transport(alpha, k, limit - 1)
    consts = [log_coefficient(alpha, k, ell) for ell in range(k + 1)]
    g = Q(1)
    coeff_rows = []  # per n: a_n * (alpha+1)_n
    for n in range(limit):
        coeff_rows.append(f.coefficient(n) * g)
        g *= alpha + 1 + n
    logmap: dict = {}
    for j in range(k + 1):
        for ell in range(j, k + 1):
            cs = [coeff_rows[n] * table.r(j, ell, n) for n in range(limit)]
            series = LaurentSeries.from_coeffs(cs, 0, limit)
            logmap.setdefault(j, []).append((consts[ell], series))
    return LaplaceResult.build(-alpha - 1, "generic", logmap)


def _laplace_series_negative(f: LaurentSeries, alpha: int, k: int, order: int) -> LaplaceResult:
    limit = order if f.precision == INF else min(order, f.precision)
    head_logmap: dict = {}
    for n in range(min(-alpha, limit)):
        a = f.coefficient(n)
        if a == 0:
            continue
        mono = laplace_monomial(Q(alpha + n), k)
        # z^(n - alpha - 1 ... ) rebase: z^(-alpha-1-n+...) -> shift by n in w
        for j, comps in mono.logs:
            for c, s in comps:
                head_logmap.setdefault(j, []).append((c.scale(a), s.shift(n)))
    head = LaplaceResult.build(Q(-alpha - 1), "negative-integer", head_logmap)
    tail_coeffs = [f.coefficient(n) for n in range(-alpha, limit)]
    tail_f = LaurentSeries.from_coeffs(tail_coeffs, 0, max(0, limit + alpha))
    if tail_f.has_information() and limit + alpha > 0:
        tail = laplace_series(tail_f, Q(0), k, limit + alpha)
        logmap = head.logmap()
        for j, comps in tail.logs:
            logmap.setdefault(j, []).extend(
                (c, s.shift(-alpha)) for c, s in comps
            )
        return LaplaceResult.build(Q(-alpha - 1), "negative-integer", logmap)
    return head


# ---------------------------------------------------------------------------
# transform of logarithmic solutions


@dataclass(frozen=True)
class LaplaceTransform:
    """Sum of transform values, one :class:`LaplaceResult` per prefactor power."""

    parts: tuple

    def collect(self):
        """Map (j, token, power-class) -> (reference power, aligned series)."""
        out: dict = {}
        for part in self.parts:
            for (j, token), series in part.collect().items():
                key = (j, token, part.power - math.floor(part.power))
                if key in out:
                    ref, acc = out[key]
                    shift = part.power - ref
                    out[key] = (ref, acc + series.shift(int(shift)))
                else:
                    out[key] = (part.power, series)
        return out

    def is_zero(self):
        return all(s.is_zero() for _, s in self.collect().values())

    def agrees_with(self, other: "LaplaceTransform") -> bool:
        mine, theirs = self.collect(), other.collect()
        for key in set(mine) | set(theirs):
            pa, a = mine.get(key, (None, None))
            pb, b = theirs.get(key, (None, None))
            if a is None:
                if not b.is_zero():
                    return False
                continue
            if b is None:
                if not a.is_zero():
                    return False
                continue
            if not a.agrees_with(b.shift(int(pa - pb))):
                return False
        return True

    def to_log_series(self) -> LogExpSeries:
        """Rational transforms as a log-exp series at infinity (w = 1/x)."""
        terms = []
        for part in self.parts:
            for j, comps in part.logs:
                for c, s in comps:
                    if not c.is_rational():
                        raise UnsupportedTermError(
                            "transform carries symbolic Gamma constants"
                        )
                    # z^power (ln z)^j = w^(-power) (-ln w)^j in the w chart
                    terms.append(
                        LogExpTerm(
                            s.scale(c.rational_value() * _parity(j)),
                            -part.power,
                            j,
                            Q(0),
                        )
                    )
        return LogExpSeries.build(terms, "infinity")

    def to_json(self):
        return {"parts": [p.to_json() for p in self.parts]}


def laplace_logseries(zeta: LogExpSeries, order: int = 64) -> LaplaceTransform:
    """Termwise transform of a logarithmic solution (all delta must be 0)."""
    by_power: dict = {}
    for t in zeta.terms:
        if t.delta != 0:
            raise UnsupportedTermError("exponential factor exp(delta/x) not transformable")
        val = min(t.series.valuation, 0)
        f = t.series.shift(-val) if val else t.series
        part = laplace_series(f, t.alpha + val, t.k, order)
        by_power.setdefault(part.power, []).append(part)
    parts = []
    for power in sorted(by_power, reverse=True):
        acc = by_power[power][0]
        for extra in by_power[power][1:]:
            acc = acc + extra
        parts.append(acc)
    return LaplaceTransform(tuple(parts))
