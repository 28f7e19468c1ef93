"""Newton and Newton-Ramis polygons of differential operators.

The Newton-Ramis region of ``phi = sum a_{i,j} x^j D^i`` is the convex hull
of the leftward horizontal half-lines through the points (u, v) = (i, j-i).
Only the finite support and the right-facing boundary are stored; two
polygons are equal when their right boundaries coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedInputError
from .exact import Q
from .weyl import DiffOp, invert_chart

#: Slope marker for vertical edges.
VERTICAL = None


@dataclass(frozen=True)
class NRPolygon:
    support: frozenset
    vertices: tuple  # right boundary, ordered by increasing v
    slopes: tuple  # ((slope | VERTICAL, multiplicity), ...), sorted

    def __eq__(self, other):
        if not isinstance(other, NRPolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def finite_slopes(self):
        """Multiset of finite (non-vertical) boundary slopes."""
        return tuple((s, m) for s, m in self.slopes if s is not VERTICAL)

    def has_vertical_side(self) -> bool:
        return any(s is VERTICAL for s, _ in self.slopes)

    def slope_set(self):
        return {s for s, _ in self.slopes if s is not VERTICAL}

    def to_json(self):
        return {
            "support": [[u, v] for u, v in sorted(self.support)],
            "vertices": [[u, v] for u, v in self.vertices],
            "slopes": [
                ["inf" if s is VERTICAL else str(s), m] for s, m in self.slopes
            ],
        }


@dataclass(frozen=True)
class NewtonPolygonLocal:
    """Classic Newton polygon at a point, from points (i, ord(a_i) - i)."""

    points: tuple
    lower_hull: tuple  # boundary vertices with increasing i
    slopes: tuple  # ((slope, multiplicity), ...) with slope >= 0

    def slope_set(self):
        return {s for s, _ in self.slopes}

    def positive_part(self):
        return tuple((s, m) for s, m in self.slopes if s > 0)

    def is_regular(self) -> bool:
        return all(s == 0 for s, _ in self.slopes)

    def edge_range(self, slope):
        """The i-interval [i1, i2] spanned by the edge of the given slope."""
        for a, b in zip(self.lower_hull, self.lower_hull[1:]):
            if Q(b[1] - a[1], b[0] - a[0]) == slope:
                return a[0], b[0]
        return None

    def to_json(self):
        return {
            "points": [[i, v] for i, v in self.points],
            "lower_hull": [[i, v] for i, v in self.lower_hull],
            "slopes": [[str(s), m] for s, m in self.slopes],
        }


def _support(phi: DiffOp):
    return frozenset((i, j - i) for i, j, _ in phi.monomials())


def _right_chain(points):
    """Upper concave envelope of u over v: hull vertices by increasing v."""
    by_v: dict = {}
    for u, v in points:
        by_v[v] = max(by_v.get(v, u), u)
    pts = sorted((v, u) for v, u in by_v.items())
    chain = []
    for v, u in pts:
        while len(chain) >= 2:
            v1, u1 = chain[-2]
            v2, u2 = chain[-1]
            # keep chain concave in u as a function of v
            if (u2 - u1) * (v - v2) <= (u - u2) * (v2 - v1):
                chain.pop()
            else:
                break
        chain.append((v, u))
    return tuple((u, v) for v, u in chain)


def nr_polygon(phi: DiffOp) -> NRPolygon:
    """Newton-Ramis polygon of a nonzero operator."""
    if phi.is_zero():
        raise MalformedInputError("zero operator has no Newton-Ramis polygon")
    return _polygon_from_support(_support(phi))


def _polygon_from_support(support) -> NRPolygon:
    vertices = _right_chain(support)
    slopes = []
    for (u1, v1), (u2, v2) in zip(vertices, vertices[1:]):
        if u1 == u2:
            slopes.append((VERTICAL, v2 - v1))
        else:
            slopes.append((Q(v2 - v1, u2 - u1), abs(u2 - u1)))
    slopes.sort(key=lambda sm: (0, 0) if sm[0] is VERTICAL else (1, -sm[0]))
    return NRPolygon(frozenset(support), vertices, tuple(slopes))


def fourier_polygon(polygon: NRPolygon) -> NRPolygon:
    """Image of the polygon under the Fourier map (u, v) -> (u + v, -v)."""
    return _polygon_from_support(frozenset((u + v, -v) for u, v in polygon.support))


def local_newton(phi: DiffOp, at: str) -> NewtonPolygonLocal:
    """Classic Newton polygon at zero, or at infinity via x -> 1/w."""
    if phi.is_zero():
        raise MalformedInputError("zero operator has no Newton polygon")
    if at == "infinity":
        return local_newton(invert_chart(phi).op, "zero")
    if at != "zero":
        raise ValueError("at must be 'zero' or 'infinity'")
    pts = []
    for i, a in enumerate(phi.coeffs):
        if not a.is_zero():
            pts.append((i, a.ord() - i))
    order = phi.order
    # drop points dominated by one further right and weakly lower
    survivors = []
    min_v = None
    for i, v in sorted(pts, reverse=True):
        if min_v is None or v < min_v:
            survivors.append((i, v))
            min_v = v
    survivors.reverse()
    # lower convex hull: slopes strictly increasing left to right
    hull = []
    for i, v in survivors:
        while len(hull) >= 2:
            i1, v1 = hull[-2]
            i2, v2 = hull[-1]
            if (v2 - v1) * (i - i2) >= (v - v2) * (i2 - i1):
                hull.pop()
            else:
                break
        hull.append((i, v))
    slopes = []
    for (i1, v1), (i2, v2) in zip(hull, hull[1:]):
        slopes.append((Q(v2 - v1, i2 - i1), i2 - i1))
    regular_dim = hull[0][0]
    if regular_dim > 0:
        slopes.insert(0, (Q(0), regular_dim))
    assert sum(m for _, m in slopes) == order
    return NewtonPolygonLocal(tuple(sorted(pts)), tuple(hull), tuple(slopes))
