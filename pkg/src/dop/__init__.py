"""dop: exact computations with linear differential operators over Q.

Weyl-algebra transforms, Newton-Ramis polygons, local solution data at
regular and slope-one irregular points, a formal Laplace calculus with
symbolic Gamma-derivative constants, p-adic coefficient-growth analysis,
and a structural screen for E-operator candidates.
"""

from .exact import INF, LaurentSeries, Poly, Q, RatFun, pochhammer, series_expand
from .weyl import (
    D,
    DiffOp,
    LogExpSeries,
    LogExpTerm,
    adjoint,
    apply,
    compose,
    fourier,
    invert_chart,
    reflect,
    x_op,
)
from .polygon import NewtonPolygonLocal, NRPolygon, fourier_polygon, local_newton, nr_polygon
from .local import (
    DeltaPart,
    LocalData,
    Mat,
    SolutionBasis,
    companion,
    dual_row,
    exp_parts,
    exponents,
    frobenius_solutions,
    gauge,
    lemma51_solve,
)
from .laplace import (
    GammaVector,
    LaplaceResult,
    LaplaceTransform,
    TransportTable,
    finite_part_primitive,
    gamma_derivative,
    laplace_logseries,
    laplace_monomial,
    laplace_series,
    transport,
)
from .padic import (
    DEFAULT_PLACES,
    Place,
    RadiusExponent,
    ValuationProfile,
    e_screen,
    growth_check,
    r_algebra_member,
    radius_estimate,
    valuation,
)
from .classify import (
    ClassReport,
    GDualReport,
    check_e_conditions,
    exponent_compatibility,
    g_dual_report,
)
from .opparse import format_operator, parse_operator

__version__ = "0.1.0"
