import math
from fractions import Fraction as Q

import pytest

from dop.errors import TransportPoleError, UnsupportedTermError
from dop.exact import INF, LaurentSeries, Poly, RatFun, pochhammer
from dop.laplace import (
    GammaVector,
    LaplaceResult,
    finite_part_primitive,
    gamma_derivative,
    laplace_logseries,
    laplace_monomial,
    laplace_series,
    log_coefficient,
    transport,
)
from dop.padic import Place, ValuationProfile, radius_estimate, valuation
from dop.weyl import LogExpSeries, LogExpTerm, differentiate_logexp


# ---------------------------------------------------------------------------
# Gamma-derivative vectors


def test_gamma_vector_reduction():
    # Gamma(3/2) = (1/2) Gamma(1/2)
    g = gamma_derivative(Q(3, 2), 0)
    assert g == GammaVector(Q(1, 2), ((0, Q(1, 2)),), Q(0))
    # Gamma'(3/2) = Gamma(1/2) + (1/2) Gamma'(1/2)
    g = gamma_derivative(Q(3, 2), 1)
    assert g == GammaVector(Q(1, 2), ((0, Q(1)), (1, Q(1, 2))), Q(0))
    # integer orbit folds Gamma(1) = 1
    assert gamma_derivative(Q(3), 0) == GammaVector.of_rational(2)
    # upward reduction: Gamma(-1/2) = Gamma(1/2) / (-1/2)
    assert gamma_derivative(Q(-1, 2), 0) == GammaVector(Q(1, 2), ((0, Q(-2)),), Q(0))


def test_gamma_vector_shift_consistency():
    # Gamma^(j)(a+1) = a Gamma^(j)(a) + j Gamma^(j-1)(a) after reduction
    for a in (Q(1, 2), Q(5, 3), Q(2), Q(-4, 3)):
        for j in (1, 2, 3):
            lhs = gamma_derivative(a + 1, j)
            rhs = gamma_derivative(a, j).scale(a) + gamma_derivative(a, j - 1).scale(j)
            assert (lhs - rhs).is_zero()


# ---------------------------------------------------------------------------
# monomial transform


def test_laplace_base_case():
    r = laplace_monomial(Q(0), 0)
    assert r.power == -1
    assert dict(r.logs)[0][0][0] == GammaVector.of_rational(1)

    r = laplace_monomial(Q(1, 2), 0)
    assert r.power == Q(-3, 2)
    assert dict(r.logs)[0][0][0] == gamma_derivative(Q(3, 2), 0)

    r = laplace_monomial(Q(2), 0)
    assert dict(r.logs)[0][0][0] == GammaVector.of_rational(2)


def test_laplace_monomial_k1():
    # Gamma'(a+1) z^(-a-1) - Gamma(a+1) z^(-a-1) ln z; top rho = -1
    a = Q(1, 2)
    r = laplace_monomial(a, 1)
    logs = dict(r.logs)
    assert logs[0][0][0] == gamma_derivative(a + 1, 1)
    assert logs[1][0][0] == -gamma_derivative(a + 1, 0)
    # normalized top coefficient
    assert logs[1][0][0].try_ratio(gamma_derivative(a + 1, 0)) == -1


def test_laplace_monomial_top_rho_sign():
    for a in (Q(1, 3), Q(2), Q(7, 2)):
        for k in range(4):
            r = laplace_monomial(a, k)
            top = dict(r.logs)[k][0][0]
            assert top.try_ratio(gamma_derivative(a + 1, 0)) == (-1) ** k


def test_laplace_negative_monomial():
    # alpha = -1, k = 0: leading log coefficient +1, companion -Gamma'(1)
    r = laplace_monomial(Q(-1), 0)
    assert r.branch == "negative-integer"
    assert r.power == 0
    logs = dict(r.logs)
    assert logs[1][0][0] == GammaVector.of_rational(1)
    assert logs[0][0][0] == GammaVector(Q(1), ((1, Q(-1)),), Q(0))


def test_laplace_negative_top_coefficient():
    # rho^(k)_{alpha,k+1} = (-1)^(alpha+1) / ((k+1) (-alpha-1)!)
    for a in (-1, -2, -3):
        for k in (0, 2):
            r = laplace_monomial(Q(a), k)
            top = dict(r.logs)[k + 1]
            total = GammaVector.of_rational(0)
            for c, s in top:
                assert s.coefficient(0) == 1
                total = total + c
            sign = 1 if (a + 1) % 2 == 0 else -1
            expected = Q(sign, (k + 1) * math.factorial(-a - 1))
            assert total == GammaVector.of_rational(expected)


def test_laplace_derivative_rule():
    for a in (Q(1, 2), Q(2), Q(-2)):
        for k in range(4):
            lhs = laplace_monomial(a, k).derivative()
            rhs = laplace_monomial(a + 1, k).scale(-1)
            assert lhs.agrees_with(rhs)


def _shift_residual(a, k):
    lhs = laplace_monomial(a - 1, k).scale(a)
    if k:
        lhs = lhs + laplace_monomial(a - 1, k - 1).scale(k)
    return lhs - laplace_monomial(a, k).times_z()


def test_laplace_shift_rule_zero_cases():
    for a in (Q(1, 2), Q(2), Q(-1, 2), Q(-3, 2)):
        for k in range(4):
            assert _shift_residual(a, k).is_zero()
    for a in (Q(-1), Q(-2)):
        for k in (1, 2, 3):
            assert _shift_residual(a, k).is_zero()


def test_laplace_shift_rule_correction():
    for a in (Q(-1), Q(-2)):
        correction = LaplaceResult.build(
            -a,
            "generic",
            {
                0: [
                    (
                        GammaVector.of_rational(
                            Q((-1) ** int(-a), math.factorial(int(-a)))
                        ),
                        LaurentSeries.one(),
                    )
                ]
            },
        )
        assert _shift_residual(a, 0).agrees_with(correction)


# ---------------------------------------------------------------------------
# finite parts


def test_finite_part_examples():
    fp = finite_part_primitive(Q(1, 2), 0, 0, 8)
    (term,) = fp.terms
    assert term.alpha == Q(1, 2) and term.series.coefficient(1) == Q(2, 3)

    fp = finite_part_primitive(Q(-1), 0, 0, 8)
    (term,) = fp.terms
    assert term.k == 1 and term.series.coefficient(0) == 1

    fp = finite_part_primitive(Q(0), 0, 1, 8)
    (term,) = fp.terms
    assert term.series.coefficient(2) == Q(1, 2)


def test_finite_part_derivative_chain(rng):
    for _ in range(12):
        a = Q(rng.randint(-3, 3), rng.choice([1, 2, 3]))
        k = rng.randint(0, 2)
        n = rng.randint(1, 4)
        lhs = differentiate_logexp(finite_part_primitive(a, k, n, 10))
        rhs = finite_part_primitive(a, k, n - 1, 10)
        assert (lhs - rhs).is_zero()


def test_partial_fraction_identity():
    X = Poly((0, 1))
    for n in range(21):
        lhs = RatFun(Poly(()), Poly((1,)))
        for m in range(n + 1):
            c = Q((-1) ** m, math.factorial(m) * math.factorial(n - m))
            lhs = lhs + RatFun(Poly((c,)), X.shift_arg(0) + m)
        den = Poly((1,))
        for m in range(n + 1):
            den = den * (X + m)
        assert lhs == RatFun(Poly((1,)), den)


def test_transform_of_finite_parts_is_n_independent():
    # z^(n+1) L(F_n) does not depend on n once n >= -alpha - 1
    for a in (Q(1, 2), Q(-1), Q(2)):
        results = []
        for n in range(max(0, int(-a)), 4):
            fp = finite_part_primitive(a, 1, n, 6)
            t = laplace_logseries(fp, 8)
            assert len(t.parts) == 1
            results.append(t.parts[0].times_z(n + 1))
        for other in results[1:]:
            assert results[0].agrees_with(other)


# ---------------------------------------------------------------------------
# transport


def test_transport_identity_layer():
    tab = transport(Q(1, 2), 2, 6)
    for j in range(3):
        for ell in range(3):
            assert tab.r(j, ell, 0) == (1 if j == ell else 0)


def test_transport_top_and_diagonal():
    tab = transport(Q(1, 2), 2, 10)
    for n in range(11):
        for j in range(3):
            assert tab.r(j, j, n) == 1  # corrected recurrence: constant, not (-1)^n
    # one step of the corrected recurrence with j = 1
    assert tab.r(0, 1, 1) == -Q(1, Q(1, 2) + 1)


def test_transport_pole():
    with pytest.raises(TransportPoleError):
        transport(Q(-3), 1, 5)


def test_transport_matches_closed_form():
    a = Q(1, 2)
    for k in (0, 1, 2):
        tab = transport(a, k, 12)
        for n in range(13):
            shift = pochhammer(a + 1, n)
            for j in range(k + 1):
                closed = log_coefficient(a + n, k, j)
                via = GammaVector.of_rational(0)
                for ell in range(j, k + 1):
                    via = via + log_coefficient(a, k, ell).scale(tab.r(j, ell, n))
                assert (closed - via.scale(shift)).is_zero()


def test_transport_growth_bound():
    # finite-N proxy of limsup |r|_v^{1/n} <= 1
    tab = transport(Q(1, 2), 2, 500)
    for p in (2, 3, 5):
        place = Place(p)
        worst = 0.0
        for n in range(250, 501):
            for j in range(3):
                for ell in range(j, 3):
                    r = tab.r(j, ell, n)
                    if r == 0:
                        continue
                    worst = min(worst, valuation(r, place) / n)
        assert worst >= -0.05


# ---------------------------------------------------------------------------
# series transform


def test_laplace_series_single_term_reduction():
    r1 = laplace_series(LaurentSeries.one(6), Q(1, 2), 2, 6)
    r2 = laplace_monomial(Q(1, 2), 2)
    assert r1.agrees_with(r2)


def test_laplace_series_pochhammer():
    f = LaurentSeries.from_coeffs([1] * 8, 0, 8)
    r = laplace_series(f, Q(1, 2), 0, 8)
    series = r.collect()[(0, ("g", Q(1, 2), 0))]
    for n in range(8):
        assert series.coefficient(n) == pochhammer(Q(1, 2), n + 1)


def test_laplace_series_top_layer_rational():
    f = LaurentSeries.from_coeffs([Q(1), Q(-2), Q(3), Q(5)], 0, 4)
    a = Q(1, 3)
    for k in (0, 1, 2):
        r = laplace_series(f, a, k, 4)
        top = r.top_series()
        for n in range(4):
            assert top.coefficient(n) == f.coefficient(n) * pochhammer(a + 1, n)


def test_laplace_series_radius_shift_small():
    # radius exponent of the top layer shifts by +1/(p-1) (Prop 4.3 direction)
    fact = [1]
    for n in range(1, 400):
        fact.append(fact[-1] * n)
    euler = LaurentSeries.from_coeffs([(-1) ** n * fact[n] for n in range(400)], 0, 400)
    r = laplace_series(euler, Q(1, 2), 0, 400)
    top = r.top_series()
    p = Place(3)
    s_f = radius_estimate(ValuationProfile.from_series(euler, p, 399), 200).s
    s_h = radius_estimate(ValuationProfile.from_series(top, p, 399), 200).s
    assert abs(float(s_h - s_f) - 0.5) < 0.05


def test_laplace_series_negative_alpha_split():
    # head polynomial + shifted tail; log power k+1 appears
    f = LaurentSeries.from_coeffs([1, 1, 1, 1, 1], 0, 5)
    r = laplace_series(f, Q(-2), 1, 5)
    assert r.branch == "negative-integer"
    assert max(r.log_powers()) == 2


def test_laplace_logseries_examples():
    geo = LogExpSeries.from_series(LaurentSeries.from_coeffs([1] * 6, 0, 6))
    out = laplace_logseries(geo, 6).to_log_series()
    (term,) = out.terms
    # w * (sum n! w^n) in the w = 1/x chart
    assert out.chart == "infinity" and term.alpha == 0 and term.series.valuation == 1
    for n in range(5):
        assert term.series.coefficient(n + 1) == math.factorial(n)

    xm1 = LogExpSeries.build(
        [LogExpTerm(LaurentSeries.monomial(1, -1, 5), Q(0), 0, Q(0))], "zero"
    )
    t = laplace_logseries(xm1, 5)
    assert max(t.parts[0].log_powers()) == 1  # ln-branch appears

    with pytest.raises(UnsupportedTermError):
        laplace_logseries(
            LogExpSeries.build(
                [LogExpTerm(LaurentSeries.one(5), Q(0), 0, Q(1))], "zero"
            ),
            5,
        )


def test_laplace_logseries_monomial_reduction():
    s = LogExpSeries.build(
        [LogExpTerm(LaurentSeries.one(5), Q(1, 2), 1, Q(0))], "zero"
    )
    t = laplace_logseries(s, 5)
    assert len(t.parts) == 1
    assert t.parts[0].agrees_with(laplace_series(LaurentSeries.one(5), Q(1, 2), 1, 5))
