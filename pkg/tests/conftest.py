import random
from fractions import Fraction as Q

import pytest

from dop.exact import Poly
from dop.weyl import DiffOp
from dop.opparse import parse_operator


def random_poly(rng, max_degree=5, zero_ok=True):
    deg = rng.randint(-1 if zero_ok else 0, max_degree)
    if deg < 0:
        return Poly()
    coeffs = [Q(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(deg + 1)]
    if all(c == 0 for c in coeffs):
        coeffs[-1] = Q(1)
    return Poly(coeffs)


def random_operator(rng, max_order=4, max_degree=5):
    order = rng.randint(0, max_order)
    coeffs = [random_poly(rng, max_degree) for _ in range(order + 1)]
    if coeffs[-1].is_zero():
        coeffs[-1] = Poly((1,))
    return DiffOp(coeffs)


@pytest.fixture
def rng():
    return random.Random(20240817)


def gauss_hypergeometric(a, b, c):
    """theta (theta + c - 1) - x (theta + a)(theta + b)."""
    theta = parse_operator("x*D")
    return theta * (theta + (Q(c) - 1)) - parse_operator("x") * (theta + Q(a)) * (
        theta + Q(b)
    )


#: Regular test corpus: Euler operator, theta^2, geometric annihilator, 2F1.
REGULAR_CORPUS = {
    "euler": parse_operator("x*D") - Q(1, 3),
    "theta2": parse_operator("x*D") * parse_operator("x*D"),
    "geometric": parse_operator("(1 - x)*D - 1"),
    "gauss": gauss_hypergeometric(Q(1, 2), Q(1, 3), Q(1, 4)),
}
