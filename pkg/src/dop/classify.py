"""Structural screening of E-operator candidates and dual G-operator shape.

The three candidate conditions are: (1) some coefficient actually involves
x; (2) the Newton-Ramis slopes all lie in {-1, 0}; (3) the local data at
infinity has the shape Y(1/x) (1/x)^Gamma exp(-Delta x) with rational
Gamma-eigenvalues and Delta entries, with per-place radius margins of the
formal series factors sampled at finitely many places.  Rejection is
driven only by the exact conditions; the sampled arithmetic margins are
reported, never used to certify sufficiency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedSlopeError
from .exact import INF, LaurentSeries, Q
from .local import LocalData, _conjugate, exp_parts, exponents, theta_form
from .padic import DEFAULT_PLACES, Place, RadiusExponent, ValuationProfile, radius_estimate
from .polygon import VERTICAL, nr_polygon
from .weyl import DiffOp, fourier, invert_chart


@dataclass(frozen=True)
class FactorMargin:
    """Radius margin of one formal series factor at one place.

    A negative margin at finitely many places is harmless for the
    infinite product; ``collapsing`` flags the only fatal shape, a radius
    estimate diverging to zero.
    """

    delta: Fraction
    exponent: Fraction
    place: Place
    s_estimate: Fraction | float
    margin: Fraction | float
    collapsing: bool = False

    def to_json(self):
        fin = not isinstance(self.margin, float)
        return {
            "delta": str(self.delta),
            "exponent": str(self.exponent),
            "place": self.place.p,
            "s_estimate": str(self.s_estimate) if fin else "inf",
            "margin": str(self.margin) if fin else "inf",
            "collapsing": self.collapsing,
        }


@dataclass(frozen=True)
class ClassReport:
    operator: str
    condition1: bool
    condition2: bool
    offending_slopes: tuple
    condition3: str  # pass | fail | unsupported | skipped
    condition3_detail: str
    local_data: LocalData | None
    margins: tuple  # FactorMargin entries
    arithmetic_consistent: bool | None
    verdict: str  # candidate-E-operator | rejected | inconclusive
    reasons: tuple

    @property
    def exit_code(self) -> int:
        if self.verdict == "candidate-E-operator":
            return 0
        if self.verdict == "rejected":
            return 2
        return 3

    def to_json(self):
        return {
            "operator": self.operator,
            "condition1": {"pass": self.condition1},
            "condition2": {
                "pass": self.condition2,
                "offending_slopes": list(self.offending_slopes),
            },
            "condition3": {
                "status": self.condition3,
                "detail": self.condition3_detail,
                "local_data": None if self.local_data is None else self.local_data.to_json(),
                "margins": [m.to_json() for m in self.margins],
                "arithmetic_consistent": self.arithmetic_consistent,
            },
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def check_e_conditions(psi: DiffOp, places=DEFAULT_PLACES, order: int = 240) -> ClassReport:
    """Run the three screening conditions on psi.

    The verdict is "rejected" only on exact grounds (conditions 1-2, or a
    structurally non-rational condition 3); the per-place margins behind
    the infinite product are reported with a consistency flag.
    """
    from .opparse import format_operator

    reasons = []
    cond1 = psi.max_coeff_degree() >= 1
    if not cond1:
        reasons.append("condition 1: all coefficients are constants")
    nr = nr_polygon(psi)
    offending = [str(s) for s, _ in nr.finite_slopes() if s not in (Q(-1), Q(0))]
    if nr.has_vertical_side():
        offending.append("inf")
    cond2 = not offending
    if not cond2:
        reasons.append(
            "condition 2: Newton-Ramis slopes " + ", ".join(offending) + " outside {-1, 0}"
        )
    cond3 = "skipped"
    detail = ""
    local = None
    margins: list = []
    arith = None
    try:
        local = exp_parts(psi, "infinity")
        bad_tokens = list(local.exponent_tokens) + [
            p.token for p in local.delta_parts if p.token
        ]
        if bad_tokens:
            cond3 = "unsupported"
            detail = "non-rational local data: " + "; ".join(bad_tokens)
        else:
            cond3 = "pass"
            detail = "rational exponential parts and exponents at infinity"
            margins = _factor_margins(psi, local, places, order)
            # the infinite product only dies on a radius collapsing to zero;
            # finitely many negative margins are expected at bad places
            arith = not any(m.collapsing for m in margins)
    except UnsupportedSlopeError as exc:
        cond3 = "unsupported"
        detail = str(exc)
    if not cond1 or not cond2:
        verdict = "rejected"
    elif cond3 == "unsupported":
        verdict = "inconclusive"
        reasons.append("condition 3: " + detail)
    else:
        verdict = "candidate-E-operator"
    return ClassReport(
        format_operator(psi),
        cond1,
        cond2,
        tuple(offending),
        cond3,
        detail,
        local,
        tuple(margins),
        arith,
        verdict,
        tuple(reasons),
    )


def _factor_margins(psi: DiffOp, local: LocalData, places, order: int):
    """Per-place radius margins of the sampled rank-one series factors."""
    out = []
    work = invert_chart(psi).op
    window = max(8, order // 2)
    for part in local.delta_parts:
        if part.delta is None or part.delta == 0 or part.exponent is None:
            continue
        series = _rank_one_series(work, part.delta, part.exponent, order)
        if series is None:
            continue
        for place in places:
            profile = ValuationProfile.from_series(series, place, order - 1)
            est = radius_estimate(profile, window)
            target = -place.pi_exponent
            margin = est.s if isinstance(est.s, float) else est.s - target
            ratios = [
                float(Q(v, n))
                for n, v in enumerate(profile.values)
                if n >= 1 and not isinstance(v, float)
            ]
            collapsing = (
                len(ratios) > 8
                and ratios[-1] - ratios[len(ratios) // 2] < -0.5
                and ratios[-1] < -2
            )
            out.append(
                FactorMargin(part.delta, part.exponent, place, est.s, margin, collapsing)
            )
    return out


def _rank_one_series(work: DiffOp, delta, gamma, order: int):
    """Power-series part of the solution exp(delta/w) w^gamma u(w), u(0)=1."""
    conj = _conjugate(_conjugate(work, -delta, -2), gamma, -1)
    tf = theta_form(conj)
    s0 = min(tf)
    P = tf[s0]
    if P.eval(Q(0)) != 0:
        return None
    shifts = {s - s0: q for s, q in tf.items() if s != s0}
    u = [Q(1)]
    for m in range(1, order):
        pm = P.eval(Q(m))
        if pm == 0:
            return None
        acc = Q(0)
        for t, qpoly in shifts.items():
            if 1 <= t <= m:
                acc += qpoly.eval(Q(m - t)) * u[m - t]
        u.append(-acc / pm)
    return LaurentSeries.from_coeffs(u, 0, order)


@dataclass(frozen=True)
class GDualReport:
    operator: str
    slopes_ok: bool
    offending_slopes: tuple
    exponents_zero: tuple
    exponents_infinity: tuple
    tokens: tuple
    regular: bool
    verdict: str  # pass | fail
    reasons: tuple

    def to_json(self):
        return {
            "operator": self.operator,
            "slopes_ok": self.slopes_ok,
            "offending_slopes": list(self.offending_slopes),
            "exponents_zero": [str(e) for e in self.exponents_zero],
            "exponents_infinity": [str(e) for e in self.exponents_infinity],
            "tokens": list(self.tokens),
            "regular": self.regular,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def g_dual_report(phi: DiffOp) -> GDualReport:
    """Shape test for the dual G-operator side.

    Passes iff the Newton-Ramis right boundary carries only vertical
    edges (slopes 0 and infinity in the classical reading) and the
    exponents at 0 and infinity are rational.
    """
    from .opparse import format_operator

    reasons = []
    nr = nr_polygon(phi)
    offending = [str(s) for s, _ in nr.finite_slopes()]
    slopes_ok = not offending
    if not slopes_ok:
        reasons.append("Newton-Ramis slopes " + ", ".join(offending) + " outside {0, inf}")
    exps0: tuple = ()
    expsi: tuple = ()
    tokens: list = []
    regular = True
    try:
        d0 = exponents(phi, "zero")
        di = exponents(phi, "infinity")
        exps0, expsi = d0.exponents, di.exponents
        tokens = list(d0.exponent_tokens) + list(di.exponent_tokens)
        regular = d0.regular and di.regular
        if not regular:
            reasons.append("irregular singularity (nonzero exponential part)")
        if tokens:
            reasons.append("non-rational exponents: " + "; ".join(tokens))
    except UnsupportedSlopeError as exc:
        regular = False
        reasons.append(str(exc))
    verdict = "pass" if slopes_ok and regular and not tokens else "fail"
    return GDualReport(
        format_operator(phi),
        slopes_ok,
        tuple(offending),
        exps0,
        expsi,
        tuple(tokens),
        regular,
        verdict,
        tuple(reasons),
    )


@dataclass(frozen=True)
class CompatReport:
    alphas: tuple
    gammas: tuple
    violations: tuple
    compatible: bool

    def to_json(self):
        return {
            "alphas": [str(a) for a in self.alphas],
            "gammas": [str(g) for g in self.gammas],
            "violations": [str(a) for a in self.violations],
            "compatible": self.compatible,
        }


def compatible_sets(alphas, gammas):
    """alpha_i = +-gamma_j + integer for some j, for every i; returns violations."""
    out = []
    for a in alphas:
        ok = any((a - g).denominator == 1 or (a + g).denominator == 1 for g in gammas)
        if not ok:
            out.append(a)
    return tuple(out)


def exponent_compatibility(psi: DiffOp) -> CompatReport:
    """Constraint linking exponents of the inverse transform at 0 with the
    Gamma-eigenvalues of psi at infinity: every exponent must be congruent
    to +-gamma modulo 1."""
    phi = fourier(psi, "inverse")
    d0 = exponents(phi, "zero")
    if not d0.regular or d0.exponent_tokens:
        raise UnsupportedSlopeError("inverse transform is not regular rational at 0")
    di = exp_parts(psi, "infinity")
    if di.exponent_tokens or any(p.token for p in di.delta_parts):
        raise UnsupportedSlopeError("irrational local data at infinity")
    gammas = list(di.exponents) + [
        p.exponent for p in di.delta_parts if p.exponent is not None
    ]
    violations = compatible_sets(d0.exponents, gammas)
    return CompatReport(
        tuple(d0.exponents), tuple(gammas), violations, not violations
    )
