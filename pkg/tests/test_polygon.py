from fractions import Fraction as Q

import pytest

from conftest import random_operator
from dop.errors import MalformedInputError
from dop.opparse import parse_operator as P
from dop.polygon import VERTICAL, fourier_polygon, local_newton, nr_polygon
from dop.weyl import DiffOp, fourier, reflect


def boundary_u(vertices, v):
    """Brute-force right-boundary abscissa at height v (None outside)."""
    lo, hi = vertices[0][1], vertices[-1][1]
    if not lo <= v <= hi:
        return None
    for (u1, v1), (u2, v2) in zip(vertices, vertices[1:]):
        if v1 <= v <= v2:
            if v1 == v2:
                return max(u1, u2)
            return Q(u1) + Q(u2 - u1) * Q(v - v1, v2 - v1)
    return Q(vertices[0][0])


def test_nr_examples():
    p = nr_polygon(P("x*D - 3"))
    assert p.finite_slopes() == () and not p.has_vertical_side()
    assert set(p.support) == {(1, 0), (0, 0)}

    p = nr_polygon(P("D - 1"))
    assert set(p.vertices) == {(0, 0), (1, -1)}
    assert p.finite_slopes() == ((Q(-1), 1),)

    p = nr_polygon(P("D^2 - x"))
    assert set(p.support) == {(2, -2), (0, 1)}
    assert p.finite_slopes() == ((Q(-3, 2), 2),)


def test_nr_zero_operator():
    with pytest.raises(MalformedInputError):
        nr_polygon(DiffOp())


def test_nr_support_left_of_boundary(rng):
    # oracle: every support point lies weakly left of the right boundary
    for _ in range(120):
        phi = random_operator(rng)
        if phi.is_zero():
            continue
        p = nr_polygon(phi)
        for u, v in p.support:
            b = boundary_u(p.vertices, v)
            assert b is not None and u <= b


def test_nr_reflect_invariance(rng):
    for _ in range(80):
        phi = random_operator(rng)
        if phi.is_zero():
            continue
        assert nr_polygon(reflect(phi)) == nr_polygon(phi)


def test_fourier_polygon_examples():
    img = fourier_polygon(nr_polygon(P("D - 1")))
    assert img == nr_polygon(P("-x - 1"))
    assert img.vertices == ((0, 0), (0, 1))

    flat = nr_polygon(P("x^2*D^2 + x*D + 1"))
    assert fourier_polygon(flat).finite_slopes() == flat.finite_slopes() == ()

    img = fourier_polygon(nr_polygon(P("D^2 - x")))
    # edge endpoints (2,-2),(0,1) map to (0,2),(1,-1): slope -3
    assert img.finite_slopes() == ((Q(-3), 1),)


def test_fourier_polygon_functorial(rng):
    for _ in range(80):
        phi = random_operator(rng)
        if phi.is_zero():
            continue
        assert nr_polygon(fourier(phi)) == fourier_polygon(nr_polygon(phi))


def test_vertical_side_iff_leading_not_monomial():
    cases = [
        (P("x*D^2 + D + 1"), False),
        (P("(x^2 + x)*D^2 + 1"), True),
        (P("(1 - x)*D - 1"), True),
        (P("x^3*D - x"), False),
        (P("D^2 - x"), False),
    ]
    for phi, has_vertical in cases:
        assert nr_polygon(phi).has_vertical_side() == has_vertical
        assert phi.leading().is_monomial() != has_vertical


def test_eg_duality_on_horizontal_polygons(rng):
    # slopes(NR) subset {0} (no proper edges) <=> slopes(NR(F)) subset {0,-1}
    found = 0
    for _ in range(300):
        phi = random_operator(rng, max_order=3, max_degree=3)
        if phi.is_zero():
            continue
        p = nr_polygon(phi)
        horizontal = not p.finite_slopes()
        q = nr_polygon(fourier(phi))
        dual = all(s == Q(-1) for s, _ in q.finite_slopes()) and not q.has_vertical_side()
        # vertical sides of NR(phi) map onto the -1 slopes; exclude them from
        # the "horizontal" reading on the left side
        if horizontal and not p.has_vertical_side():
            found += 1
            assert not q.finite_slopes() or dual
        if horizontal:
            assert all(s == Q(-1) for s, _ in q.finite_slopes())
    assert found > 5


def test_local_newton_examples():
    assert local_newton(P("D - 1"), "infinity").slope_set() == {1}
    assert local_newton(P("x*D - 2"), "zero").slope_set() == {0}
    assert local_newton(P("D^2 - x"), "zero").slope_set() == {0}
    euler = local_newton(P("x*D - 2"), "zero")
    assert euler.slopes == ((Q(0), 1),)
    airy_inf = local_newton(P("D^2 - x"), "infinity")
    assert airy_inf.slopes == ((Q(3, 2), 2),)


def test_local_newton_vs_nr_slopes(rng):
    # positive NR slopes are slopes at 0, negative ones are -(slopes at infinity)
    for _ in range(60):
        phi = random_operator(rng)
        if phi.is_zero():
            continue
        nr = nr_polygon(phi)
        at0 = local_newton(phi, "zero").slope_set()
        atinf = local_newton(phi, "infinity").slope_set()
        for s, _ in nr.finite_slopes():
            if s > 0:
                assert s in at0
            elif s < 0:
                assert -s in atinf


def test_polygon_json():
    data = nr_polygon(P("D - 1")).to_json()
    assert data["slopes"] == [["-1", 1]]
    assert sorted(data["vertices"]) == [[0, 0], [1, -1]]
