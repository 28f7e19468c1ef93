import math
from fractions import Fraction as Q

import pytest

from dop.errors import HypothesisError, MalformedInputError
from dop.exact import INF, LaurentSeries
from dop.padic import (
    Place,
    ValuationProfile,
    e_screen,
    growth_check,
    r_algebra_member,
    radius_estimate,
    valuation,
)

FACT = [1]
for _n in range(1, 2100):
    FACT.append(FACT[-1] * _n)


def euler_series(N):
    return LaurentSeries.from_coeffs([(-1) ** n * FACT[n] for n in range(N + 1)], 0, N + 1)


def geometric_series(N):
    return LaurentSeries.from_coeffs([1] * (N + 1), 0, N + 1)


def test_valuation_examples():
    assert valuation(12, Place(2)) == 2
    assert valuation(Q(1, 9), Place(3)) == -2
    assert valuation(FACT[100], Place(5)) == 24  # Legendre: 20 + 4
    assert valuation(0, Place(7)) == INF


def test_valuation_multiplicative(rng):
    place = Place(3)
    for _ in range(60):
        a = Q(rng.randint(1, 400), rng.randint(1, 400))
        b = Q(rng.randint(1, 400), rng.randint(1, 400))
        assert valuation(a * b, place) == valuation(a, place) + valuation(b, place)


def test_valuation_legendre_oracle(rng):
    # v_p(n!) = (n - digitsum_p(n)) / (p - 1), checked against the loop
    for p in (2, 3, 5):
        place = Place(p)
        for _ in range(20):
            n = rng.randint(1, 1500)
            digitsum = 0
            m = n
            while m:
                digitsum += m % p
                m //= p
            assert valuation(FACT[n], place) == (n - digitsum) // (p - 1)


def test_place_validation():
    with pytest.raises(MalformedInputError):
        Place(6)
    assert Place(3).pi_exponent == Q(-1, 2)


def test_radius_estimate_examples():
    geo = geometric_series(256)
    est = radius_estimate(ValuationProfile.from_series(geo, Place(5), 256), 128)
    assert est.s == 0

    est = radius_estimate(ValuationProfile.from_series(euler_series(2048), Place(2), 2048), 1024)
    assert abs(float(est.s) - 1) < 0.02

    inv = LaurentSeries.from_coeffs([Q(1, FACT[n]) for n in range(2049)], 0, 2049)
    est = radius_estimate(ValuationProfile.from_series(inv, Place(2), 2048), 1024)
    assert abs(float(est.s) + 1) < 0.02


def test_radius_estimate_all_zero_tail():
    f = LaurentSeries.from_coeffs([1, 1, 0, 0, 0, 0], 0, 6)
    est = radius_estimate(ValuationProfile.from_series(f, Place(2), 5), 3)
    assert est.s == INF


def test_radius_product_bound(rng):
    # exact ultrametric convolution bound, coefficient by coefficient
    place = Place(3)
    for _ in range(10):
        f = LaurentSeries.from_coeffs(
            [Q(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(30)], 0, 30
        )
        g = LaurentSeries.from_coeffs(
            [Q(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(30)], 0, 30
        )
        if f.is_zero() or g.is_zero():
            continue
        prod = f * g
        for n in range(0, 29):
            c = prod.coefficient(n)
            if c == 0:
                continue
            bound = min(
                valuation(f.coefficient(i), place) + valuation(g.coefficient(n - i), place)
                for i in range(n + 1)
                if f.coefficient(i) and g.coefficient(n - i)
            )
            assert valuation(c, place) >= bound


def test_radius_product_bound_asymptotic():
    # s(f*g) >= min(s(f), s(g)) for series in the stable scaling regime
    N = 400
    place = Place(3)
    f = euler_series(N)
    g = LaurentSeries.from_coeffs([Q(1, FACT[n]) for n in range(N + 1)], 0, N + 1)
    sf = radius_estimate(ValuationProfile.from_series(f, place, N), N // 2).s
    sg = radius_estimate(ValuationProfile.from_series(g, place, N), N // 2).s
    prod = f * g
    sp = radius_estimate(ValuationProfile.from_series(prod, place, N - 1), N // 2).s
    assert float(sp) >= min(float(sf), float(sg)) - 0.02


def test_pochhammer_radius_shift():
    # multiplying coefficients by (alpha)_{n+1} shifts s by +1/(p-1)
    from dop.exact import pochhammer

    N = 1500
    geo = geometric_series(N)
    shifted = LaurentSeries.from_coeffs(
        [pochhammer(Q(1, 2), n + 1) for n in range(N + 1)], 0, N + 1
    )
    for p in (3, 5):
        place = Place(p)
        s0 = radius_estimate(ValuationProfile.from_series(geo, place, N), N // 2).s
        s1 = radius_estimate(ValuationProfile.from_series(shifted, place, N), N // 2).s
        assert abs(float(s1 - s0) - 1 / (p - 1)) < 0.02


def test_growth_check_examples():
    r = growth_check("factorial", Place(2), 1024)
    assert r.deviation_at_N < 0.001
    # Legendre bound holds on the whole window
    assert r.max_deviation <= 2 * math.log(512, 2) / 512

    r = growth_check(("pochhammer", Q(1, 2)), Place(3), 729)
    assert r.deviation_at_N < 0.01

    r1 = growth_check(("pochhammer", 1), Place(5), 400)
    r2 = growth_check("factorial", Place(5), 400)
    assert r1.deviation_at_N == r2.deviation_at_N


def test_growth_check_hypothesis_error():
    with pytest.raises(HypothesisError):
        growth_check(("pochhammer", Q(1, 3)), Place(3), 64)
    with pytest.raises(HypothesisError):
        growth_check(("pochhammer", 0), Place(3), 64)


def test_e_screen_verdicts():
    places = [Place(2), Place(3), Place(5)]
    assert e_screen(euler_series(1024), places, 1024).verdict == "consistent-with-E"
    sq = LaurentSeries.from_coeffs([FACT[n] ** 2 for n in range(1025)], 0, 1025)
    rep = e_screen(sq, places, 1024)
    assert rep.verdict == "inconsistent" and not rep.archimedean_ok
    assert e_screen(geometric_series(1024), places, 1024).verdict == "consistent-with-E"


def test_e_screen_margin_signs():
    # Euler: margin ~ 0 at each place (s = 1/(p-1) meets the target exactly)
    rep = e_screen(euler_series(1024), [Place(2), Place(3)], 1024)
    for m in rep.places:
        assert abs(float(m.margin)) < 0.05


def test_r_algebra_member():
    euler = euler_series(600)
    places = [Place(2), Place(3)]
    rep = r_algebra_member(euler, [euler], 0, places, 600)
    assert rep.member  # reflexivity

    # dividing the bound by pi_v once admits the geometric series exactly
    geo = geometric_series(600)
    rep = r_algebra_member(geo, [euler], 1, places, 600)
    assert rep.member
    rep = r_algebra_member(geo, [euler], 0, places, 600)
    assert not rep.member

    # larger valuations are always inside at shift 0
    sq = LaurentSeries.from_coeffs([FACT[n] ** 2 for n in range(601)], 0, 601)
    rep = r_algebra_member(sq, [euler], 0, places, 600)
    assert rep.member
