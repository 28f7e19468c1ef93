"""p-adic valuations and coefficient-growth analysis.

All radii are handled on the exponent scale: a radius r is stored as the
rational s with r = p^s, so that the series radius is s(f) = liminf
v_p(a_n)/n and pi_v = p^(-1/(p-1)) contributes exact rational shifts.
Estimates from finite data use a disclosed tail window and are
deliberately reported as estimates, never as proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HypothesisError, MalformedInputError
from .exact import INF, LaurentSeries, Q, _q, pochhammer


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % d == 0:
            return n == d
    d = 37
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Place:
    """Finite place of Q above the prime p; |p|_v = 1/p, pi_v = p^(-1/(p-1))."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise MalformedInputError(f"{self.p} is not prime")

    @property
    def pi_exponent(self) -> Fraction:
        """Radius exponent of pi_v, i.e. -1/(p-1)."""
        return Q(-1, self.p - 1)


DEFAULT_PLACES = (Place(2), Place(3), Place(5), Place(7), Place(11), Place(13))


def _int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise MalformedInputError("valuation of zero")
    n = abs(n)
    v = 0
    # strip the largest dividing power in doubling chunks; fast on
    # factorial-sized integers
    while n % p == 0:
        q, step = p, 1
        while n % (q * q) == 0:
            q, step = q * q, step * 2
        n //= q
        v += step
    return v


def valuation(q, place: Place):
    """p-adic valuation of a rational; math.inf for 0."""
    q = _q(q)
    if q == 0:
        return INF
    return _int_valuation(q.numerator, place.p) - _int_valuation(q.denominator, place.p)


@dataclass(frozen=True)
class RadiusExponent:
    """Radius r = p^s; comparisons happen on s, never on floating radii."""

    s: Fraction | float  # rational, or +-math.inf markers
    place: Place
    N: int | None = None
    window: int | None = None

    def is_finite(self) -> bool:
        return not isinstance(self.s, float)

    def as_float(self) -> float:
        return float(self.s)

    def to_json(self):
        return {
            "p": self.place.p,
            "s": str(self.s) if self.is_finite() else ("inf" if self.s > 0 else "-inf"),
            "N": self.N,
            "window": self.window,
        }


@dataclass(frozen=True)
class ValuationProfile:
    """Sequence v_p(a_n) for n = 0..N (math.inf marks zero coefficients)."""

    values: tuple
    place: Place

    @classmethod
    def from_coefficients(cls, coeffs, place: Place) -> "ValuationProfile":
        vals = tuple(INF if _q(c) == 0 else valuation(c, place) for c in coeffs)
        return cls(vals, place)

    @classmethod
    def from_series(cls, f: LaurentSeries, place: Place, N: int) -> "ValuationProfile":
        if f.coeffs and f.valuation < 0:
            raise MalformedInputError("valuation profiles need power series")
        top = N + 1 if f.precision == INF else min(N + 1, f.precision)
        return cls.from_coefficients([f.coefficient(n) for n in range(top)], place)

    def __len__(self):
        return len(self.values)


def radius_estimate(profile: ValuationProfile, window: int) -> RadiusExponent:
    """Tail-window liminf proxy: min of v_p(a_n)/n over the last ``window`` n.

    Monotone-refinable by enlarging the profile; an all-zero tail yields
    the infinite-radius marker.
    """
    N = len(profile) - 1
    if window > len(profile):
        raise MalformedInputError("window exceeds profile length")
    best = None
    for n in range(max(1, N - window + 1), N + 1):
        v = profile.values[n]
        if v == INF:
            continue
        ratio = Q(v, n)
        if best is None or ratio < best:
            best = ratio
    if best is None:
        return RadiusExponent(INF, profile.place, N, window)
    return RadiusExponent(best, profile.place, N, window)


@dataclass(frozen=True)
class GrowthReport:
    kind: str
    place: Place
    N: int
    deviation_at_N: float
    max_deviation: float
    tolerance: float
    passed: bool

    def to_json(self):
        return {
            "kind": self.kind,
            "p": self.place.p,
            "N": self.N,
            "deviation_at_N": self.deviation_at_N,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def growth_check(kind, place: Place, N: int, tolerance=None) -> GrowthReport:
    """Check |v_p(term_n)/n - 1/(p-1)| over the tail window {N/2 .. N}.

    ``kind`` is "factorial" or ("pochhammer", alpha) with alpha an integer
    >= 1 or a non-integer rational whose denominator is prime to p.
    """
    p = place.p
    if kind == "factorial":
        alpha = Q(1)
        label = "factorial"
    else:
        tag, alpha = kind
        if tag != "pochhammer":
            raise MalformedInputError(f"unknown growth kind {kind!r}")
        alpha = _q(alpha)
        label = f"pochhammer({alpha})"
        if alpha.denominator == 1:
            if alpha < 1:
                raise HypothesisError("pochhammer growth law needs integer alpha >= 1")
        elif alpha.denominator % p == 0:
            raise HypothesisError(
                f"pochhammer growth law needs denominator prime to p (got {alpha}, p={p})"
            )
    if tolerance is None:
        tolerance = 2 * math.log(max(N // 2, 2), p) / max(N // 2, 2)
    target = Q(1, p - 1)
    v = 0
    devs = {}
    for n in range(1, N + 1):
        term = alpha + n - 1
        v += _int_valuation(term.numerator, p) - _int_valuation(term.denominator, p)
        if n >= N // 2:
            devs[n] = abs(Q(v, n) - target)
    max_dev = max(devs.values())
    report = GrowthReport(
        label,
        place,
        N,
        float(devs[N]),
        float(max_dev),
        float(tolerance),
        max_dev <= tolerance,
    )
    return report


# ---------------------------------------------------------------------------
# screening


@dataclass(frozen=True)
class PlaceMargin:
    place: Place
    s_estimate: Fraction | float
    target: Fraction
    margin: Fraction | float
    diverging: bool

    def to_json(self):
        fin = not isinstance(self.s_estimate, float)
        return {
            "place": self.place.p,
            "s_estimate": str(self.s_estimate) if fin else "inf",
            "target": str(self.target),
            "margin": str(self.margin) if fin else "inf",
            "diverging": self.diverging,
        }


@dataclass(frozen=True)
class ScreenReport:
    verdict: str
    places: tuple  # PlaceMargin entries
    archimedean_ok: bool
    N: int
    window: int
    notes: tuple = ()

    def to_json(self):
        return {
            "verdict": self.verdict,
            "places": [m.to_json() for m in self.places],
            "archimedean_ok": self.archimedean_ok,
            "N": self.N,
            "window": self.window,
            "notes": list(self.notes),
        }


def _tail_slope(values):
    """Growth slope between mid and end of a sequence of floats."""
    mid = values[len(values) // 2]
    end = values[-1]
    return end - mid


def e_screen(f: LaurentSeries, places, N: int, window=None) -> ScreenReport:
    """Screen a power series against the necessary growth shape at each place.

    Per place the radius-exponent estimate s(f) is compared with 1/(p-1)
    (the margin decides whether min(r_v(f) pi_v, 1) = 1 there); the
    archimedean side checks that |a_n|/n! stays within geometric growth.
    The verdict is only ever consistency at the sampled places, never a
    proof.
    """
    if window is None:
        window = max(1, N // 2)
    window = max(1, min(window, N + 1))
    margins = []
    notes = []
    zero_radius = False
    for place in places:
        profile = ValuationProfile.from_series(f, place, N)
        window = min(window, len(profile))
        est = radius_estimate(profile, window)
        target = -place.pi_exponent  # 1/(p-1)
        if not est.is_finite():
            margins.append(PlaceMargin(place, est.s, target, est.s, False))
            continue
        # detect a radius collapsing to zero: v_p(a_n)/n diverging downward
        ratios = [
            float(Q(v, n))
            for n, v in enumerate(profile.values)
            if n >= 1 and v != INF
        ]
        diverging = len(ratios) > 8 and _tail_slope(ratios) < -0.5 and ratios[-1] < -1
        zero_radius = zero_radius or diverging
        margins.append(PlaceMargin(place, est.s, target, est.s - target, diverging))
    arch = _archimedean_growth_ok(f, N)
    if not arch:
        verdict = "inconsistent"
        notes.append("archimedean growth of a_n/n! is superexponential")
    elif zero_radius:
        verdict = "inconsistent"
        notes.append("p-adic radius estimate collapses to zero at a sampled place")
    elif any(not isinstance(m.margin, float) and m.margin < Q(-3) for m in margins):
        verdict = "inconclusive"
        notes.append("strongly negative radius margin at a sampled place")
    else:
        verdict = "consistent-with-E"
    return ScreenReport(verdict, tuple(margins), arch, N, window, tuple(notes))


def _archimedean_growth_ok(f: LaurentSeries, N: int) -> bool:
    top = N + 1 if f.precision == INF else min(N + 1, f.precision)
    vals = []
    fact = 1
    for n in range(top):
        if n:
            fact *= n
        c = f.coefficient(n)
        if c == 0 or n == 0:
            continue
        mag = abs(c.numerator).bit_length() - abs(c.denominator).bit_length() - fact.bit_length()
        vals.append(mag * math.log(2) / n)
    if len(vals) < 8:
        return True
    return _tail_slope(vals) < 0.3


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    s_shift: int
    margins: tuple  # (place, s(y), bound, margin)
    N: int
    window: int
    tolerance: float

    def to_json(self):
        return {
            "member": self.member,
            "s_shift": self.s_shift,
            "margins": [
                {
                    "place": p.p,
                    "s": str(s) if not isinstance(s, float) else "inf",
                    "bound": str(b) if not isinstance(b, float) else "-inf",
                    "margin": str(m) if not isinstance(m, float) else "inf",
                }
                for p, s, b, m in self.margins
            ],
            "N": self.N,
            "window": self.window,
            "tolerance": self.tolerance,
        }


def r_algebra_member(
    y: LaurentSeries,
    baseline,
    s_shift: int,
    places,
    N: int,
    window=None,
    tolerance=0.05,
) -> MembershipReport:
    """Finite-place test of r_v(y) >= R_v(baseline) pi_v^s_shift.

    On the exponent scale: s(y) >= min_b s(b) - s_shift/(p-1), within the
    stated tolerance at each sampled place.
    """
    if window is None:
        window = max(1, N // 2)
    margins = []
    ok = True
    for place in places:
        prof = ValuationProfile.from_series(y, place, N)
        win = max(1, min(window, len(prof)))
        sy = radius_estimate(prof, win).s
        sbs = []
        for b in baseline:
            bprof = ValuationProfile.from_series(b, place, N)
            sbs.append(radius_estimate(bprof, max(1, min(window, len(bprof)))).s)
        finite = [s for s in sbs if not isinstance(s, float)]
        base = min(finite) if finite else INF
        bound = -INF if base == INF else base + s_shift * place.pi_exponent
        if isinstance(sy, float) and sy > 0:
            margin = INF
        elif isinstance(bound, float):
            margin = INF
        else:
            margin = sy - bound
        margins.append((place, sy, bound, margin))
        if not isinstance(margin, float) and float(margin) < -tolerance:
            ok = False
    return MembershipReport(ok, s_shift, tuple(margins), N, window, tolerance)
