"""Local data at singularities.

Companion matrices and gauge transforms over Q(x), indicial exponents,
Frobenius series bases at regular points (with logarithm ladders for
resonant exponents), unramified slope-one exponential parts, the
adjoint-duality row extraction from a fundamental matrix, and the
primitive solver for d/dx z = y x^a (ln x)^k exp(d/x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DopError,
    MalformedInputError,
    NotInvertibleError,
    UnsupportedExponentError,
    UnsupportedSlopeError,
    WrongRegularityError,
)
from .exact import (
    INF,
    LaurentSeries,
    Poly,
    Q,
    RatFun,
    _q,
    rational_roots,
    series_expand,
)
from .polygon import local_newton
from .weyl import DiffOp, LogExpSeries, LogExpTerm, invert_chart

# ---------------------------------------------------------------------------
# matrices over Q(x)


class Mat:
    """Square matrix over Q(x)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rs = tuple(tuple(e if isinstance(e, RatFun) else RatFun(e) for e in row) for row in rows)
        if not rs or any(len(r) != len(rs) for r in rs):
            raise MalformedInputError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rs)

    def __setattr__(self, *a):
        raise AttributeError("Mat is immutable")

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Mat":
        return cls([[0] * n for _ in range(n)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __add__(self, other):
        return Mat(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __sub__(self, other):
        return Mat(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            n = self.dim
            return Mat(
                [
                    [
                        sum((self.rows[i][t] * other.rows[t][j] for t in range(n)), RatFun(0))
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            )
        return Mat([[a * other for a in r] for r in self.rows])

    def transpose(self) -> "Mat":
        return Mat(list(zip(*self.rows)))

    def derivative(self) -> "Mat":
        return Mat([[a.derivative() for a in r] for r in self.rows])

    def inverse(self) -> "Mat":
        n = self.dim
        work = [list(r) + [RatFun(1 if i == j else 0) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
            if pivot is None:
                raise NotInvertibleError("singular matrix")
            work[col], work[pivot] = work[pivot], work[col]
            inv = RatFun(1) / work[col][col]
            work[col] = [e * inv for e in work[col]]
            for r in range(n):
                if r != col and not work[r][col].is_zero():
                    f = work[r][col]
                    work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return Mat([row[n:] for row in work])


def companion(phi: DiffOp) -> Mat:
    """Companion matrix A_phi: superdiagonal ones, last row -a_i/a_mu."""
    mu = phi.order
    if mu < 1:
        raise MalformedInputError("companion matrix needs an operator of order >= 1")
    lead = phi.leading()
    rows = []
    for i in range(mu - 1):
        rows.append([RatFun(1) if j == i + 1 else RatFun(0) for j in range(mu)])
    rows.append([RatFun(-phi.coefficient(j), lead) for j in range(mu)])
    return Mat(rows)


def gauge(Y: Mat, G: Mat) -> Mat:
    """Gauge transform Y[G] = Y G Y^-1 + Y' Y^-1."""
    Yinv = Y.inverse()
    return Y * G * Yinv + Y.derivative() * Yinv


# ---------------------------------------------------------------------------
# theta form and indicial data

_FALLING: list = [Poly((1,))]


def _falling(i: int) -> Poly:
    """theta (theta - 1) ... (theta - i + 1) as a polynomial in theta."""
    while len(_FALLING) <= i:
        n = len(_FALLING)
        _FALLING.append(_FALLING[n - 1] * Poly((-(n - 1), 1)))
    return _FALLING[i]


def theta_form(phi: DiffOp):
    """Write phi as sum_s x^s Q_s(theta); returns {s: Q_s}."""
    out: dict = {}
    for i, j, c in phi.monomials():
        s = j - i
        out[s] = out.get(s, Poly()) + _falling(i) * c
    return {s: q for s, q in out.items() if not q.is_zero()}


def indicial_polynomial(phi: DiffOp, at: str = "zero") -> Poly:
    """Coefficient of the lowest x-shift in the theta form of phi."""
    if phi.is_zero():
        raise MalformedInputError("zero operator")
    if at == "infinity":
        return indicial_polynomial(invert_chart(phi).op, "zero")
    tf = theta_form(phi)
    return tf[min(tf)]


# ---------------------------------------------------------------------------
# local data containers


@dataclass(frozen=True)
class DeltaPart:
    """One exponential layer exp(delta/x) of the local decomposition.

    ``exponent`` is the exponent of the rank-one factor when it could be
    computed (simple rational delta).  Non-rational characteristic roots
    are reported as ``token`` (irreducible factor in the symbol ``L``).
    """

    delta: Fraction | None
    multiplicity: int
    exponent: Fraction | None = None
    token: str | None = None

    @property
    def cap_delta(self):
        """Entry of the paper-style matrix in the exp(-Delta x) convention."""
        return None if self.delta is None else -self.delta

    def to_json(self):
        return {
            "delta": None if self.delta is None else str(self.delta),
            "Delta": None if self.delta is None else str(-self.delta),
            "multiplicity": self.multiplicity,
            "exponent": None if self.exponent is None else str(self.exponent),
            "token": self.token,
        }


@dataclass(frozen=True)
class LocalData:
    point: str
    exponents: tuple  # rational exponents of the regular part, with multiplicity
    exponent_tokens: tuple  # irreducible non-rational indicial factors
    delta_parts: tuple  # DeltaPart entries
    regular: bool

    def rational_deltas(self):
        return tuple(p.delta for p in self.delta_parts if p.delta is not None)

    def to_json(self):
        return {
            "point": self.point,
            "regular": self.regular,
            "exponents": [str(e) for e in self.exponents],
            "exponent_tokens": list(self.exponent_tokens),
            "delta_parts": [p.to_json() for p in self.delta_parts],
        }


def _poly_token(p: Poly, symbol: str) -> str:
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*(abs(c) for c in ints)) or 1
    parts = []
    for e in range(len(ints) - 1, -1, -1):
        c = ints[e] // g
        if c == 0:
            continue
        mono = "1" if e == 0 else (symbol if e == 1 else f"{symbol}^{e}")
        if e > 0 and abs(c) == 1:
            term = mono if c > 0 else f"-{mono}"
        else:
            term = f"{c}*{mono}" if e > 0 else f"{c}"
        parts.append(term)
    s = " + ".join(parts).replace("+ -", "- ")
    return s


def _indicial_roots(phi: DiffOp):
    p = indicial_polynomial(phi, "zero")
    roots, cof = rational_roots(p)
    exps = []
    for r, m in sorted(roots):
        exps.extend([r] * m)
    tokens = () if cof.degree < 1 else (_poly_token(cof, "t"),)
    return tuple(exps), tokens


def exponents(phi: DiffOp, at: str) -> LocalData:
    """Exponent data at 0 or infinity.

    At a regular point this is the multiset of indicial roots; at a
    slope-one irregular point the regular-part exponents come with the
    exponential layers (see :func:`exp_parts`).
    """
    work = phi if at == "zero" else invert_chart(phi).op
    np = local_newton(work, "zero")
    if not np.is_regular():
        return exp_parts(phi, at)
    exps, tokens = _indicial_roots(work)
    parts = (DeltaPart(Q(0), work.order),) if work.order else ()
    return LocalData(at, exps, tokens, parts, True)


def _conjugate(phi: DiffOp, shift_num: Fraction, shift_pow: int) -> DiffOp:
    """Image of phi under D -> D + shift_num * x^shift_pow, denominators cleared.

    shift_pow = -2 with shift_num = -delta conjugates by exp(delta/x);
    shift_pow = -1 with shift_num = gamma conjugates by x^gamma.
    """
    rows: list = [{} for _ in range(phi.order + 1)]
    power: dict = {(0, 0): Q(1)}  # (D-power, x-exponent) -> coefficient
    for i, a in enumerate(phi.coeffs):
        if not a.is_zero():
            for (t, e), c in power.items():
                for j, aj in a.terms():
                    rows[t][e + j] = rows[t].get(e + j, Q(0)) + c * aj
        nxt: dict = {}

        def _acc(key, val):
            if val:
                nxt[key] = nxt.get(key, Q(0)) + val

        for (t, e), c in power.items():
            # (D + s x^p) o (c x^e D^t)
            if e:
                _acc((t, e - 1), c * e)
            _acc((t + 1, e), c)
            _acc((t, e + shift_pow), c * shift_num)
        power = nxt
    emin = min((e for row in rows for e, c in row.items() if c), default=0)
    clear = max(0, -emin)
    polys = []
    for row in rows:
        live = {e: c for e, c in row.items() if c}
        if not live:
            polys.append(Poly())
            continue
        cs = [Q(0)] * (max(live) + clear + 1)
        for e, c in live.items():
            cs[e + clear] = c
        polys.append(Poly(cs))
    return DiffOp(polys)


def exp_parts(phi: DiffOp, at: str) -> LocalData:
    """Unramified exponential decomposition at a slope-{0,1} point.

    The growth rates delta (terms exp(delta/x) in the local variable) are
    the roots of the characteristic polynomial of the slope-one Newton
    edge; simple rational roots additionally get the exponent of their
    rank-one factor.  In the exp(-Delta x) normal form at infinity each
    delta contributes the entry Delta = -delta.
    """
    work = phi if at == "zero" else invert_chart(phi).op
    np = local_newton(work, "zero")
    bad = [s for s in np.slope_set() if s not in (0, 1)]
    if bad:
        raise UnsupportedSlopeError(
            f"slopes {sorted(bad)} at {at} are outside the supported set {{0, 1}}"
        )
    exps, tokens = _indicial_roots(work)
    parts = []
    regular_dim = sum(m for s, m in np.slopes if s == 0)
    if regular_dim:
        parts.append(DeltaPart(Q(0), regular_dim))
    edge = np.edge_range(Q(1))
    if edge is not None:
        char = _edge_char_poly(work, np, edge)
        roots, cof = rational_roots(char)
        for delta, mult in sorted(roots):
            if delta == 0:
                # padding roots belong to the non-edge layers, not here
                continue
            gamma = None
            if mult == 1:
                gamma = _rank_one_exponent(work, delta)
            parts.append(DeltaPart(delta, mult, gamma))
        if cof.degree >= 1:
            parts.append(DeltaPart(None, cof.degree, None, _poly_token(cof, "L")))
    regular = edge is None
    return LocalData(at, exps, tokens, tuple(parts), regular)


def _edge_char_poly(phi: DiffOp, np, edge) -> Poly:
    i1, i2 = edge
    v1 = dict((i, v) for i, v in np.lower_hull)[i1]
    cs = [Q(0)] * (i2 - i1 + 1)
    for i in range(i1, i2 + 1):
        line_v = v1 + (i - i1)
        c = phi.coefficient(i).coefficient(line_v + i)
        cs[i - i1] = c * (-1 if i % 2 else 1)
    return Poly(cs)


def _rank_one_exponent(phi: DiffOp, delta: Fraction):
    """Exponent of the rank-one factor exp(delta/x) x^gamma (simple delta)."""
    conj = _conjugate(phi, -delta, -2)
    p = indicial_polynomial(conj, "zero")
    roots, cof = rational_roots(p)
    flat = [r for r, m in roots for _ in range(m)]
    if len(flat) == 1 and cof.degree < 1:
        return flat[0]
    return None


# ---------------------------------------------------------------------------
# Frobenius bases


@dataclass(frozen=True)
class SolutionBasis:
    """Basis (f_1, ..., f_mu) x^C of local solutions.

    ``entries`` are the actual basis elements as log-exp series;
    ``f_parts`` the log-free series factors, ``C`` the upper-triangular
    connection matrix (eigenvalues congruent to the exponents mod 1).
    """

    chart: str
    exponents: tuple
    C: tuple
    entries: tuple
    f_parts: tuple

    def to_json(self):
        return {
            "chart": self.chart,
            "exponents": [str(e) for e in self.exponents],
            "C": [[str(c) for c in row] for row in self.C],
            "entries": [
                {
                    "terms": [
                        {
                            "alpha": str(t.alpha),
                            "k": t.k,
                            "delta": str(t.delta),
                            "series": _series_json(t.series),
                        }
                        for t in entry.terms
                    ]
                }
                for entry in self.entries
            ],
        }


def _series_json(s: LaurentSeries):
    return {
        "valuation": s.valuation if s.coeffs else 0,
        "prec": None if s.precision == INF else s.precision,
        "coeffs": [str(c) for c in s.coeffs],
    }


def frobenius_solutions(phi: DiffOp, at: str, order: int) -> SolutionBasis:
    """Frobenius basis at a regular point with rational exponents.

    Logarithm ladders appear exactly when exponents collide modulo 1 and
    the coefficient recurrence obstructs; ladders are built by ascending
    exponent representative, then ascending derivative order.
    """
    chart = "zero" if at == "zero" else "infinity"
    work = phi if at == "zero" else invert_chart(phi).op
    np = local_newton(work, "zero")
    if not np.is_regular():
        raise WrongRegularityError(f"operator is irregular at {at}")
    tf = theta_form(work)
    s0 = min(tf)
    P = tf[s0]
    roots, cof = rational_roots(P)
    if cof.degree >= 1:
        raise UnsupportedExponentError(
            f"irrational exponent factor {_poly_token(cof, 't')}"
        )
    classes: dict = {}
    for r, m in roots:
        classes.setdefault(r - math.floor(r), []).append((r, m))
    exps = tuple(sorted(r for r, m in roots for _ in range(m)))

    all_entries = []
    all_fparts = []
    blocks = []
    block_order = []
    for frac in sorted(classes):
        rts = sorted(classes[frac])
        sols = []
        for idx, (nu, mult) in enumerate(rts):
            rho = sum(m for r, m in rts[idx + 1 :])
            sols.extend(_ladder_solutions(tf, s0, P, nu, mult, rho, order))
        # triangular presentation f x^C for the whole congruence class
        sols.sort(key=lambda s: (s["logdeg"], s["root"], s["q"]))
        base = next((s for s in sols if not s["logs"][0].is_zero()), None)
        for s in sols:
            # keep every f-part nonzero: adding a log-free basis member is a
            # unipotent change of basis and preserves the triangular shape
            if base is not None and s is not base and s["logs"][0].is_zero():
                for u, series in base["logs"].items():
                    cur = s["logs"].get(u)
                    s["logs"][u] = series if cur is None else cur + series
                s["logdeg"] = max(
                    (u for u, g in s["logs"].items() if not g.is_zero()), default=0
                )
        nu0 = min(r for r, m in rts)
        N = _solve_nilpotent(sols)
        M = len(sols)
        block = [[Q(0)] * M for _ in range(M)]
        for i in range(M):
            block[i][i] = nu0
            for j in range(M):
                if N[i][j]:
                    block[i][j] += N[i][j]
        blocks.append(block)
        block_order.append(nu0)
        for s in sols:
            entry = LogExpSeries.build(
                [
                    LogExpTerm(series, frac, u, Q(0))
                    for u, series in s["logs"].items()
                    if series.has_information()
                ],
                chart,
            )
            all_entries.append(entry)
            f = s["logs"][0].shift(-math.floor(nu0))
            all_fparts.append(f)
    # assemble block-diagonal C, classes by ascending representative
    orderidx = sorted(range(len(blocks)), key=lambda t: block_order[t])
    mu = work.order
    C = [[Q(0)] * mu for _ in range(mu)]
    offset = 0
    entries = []
    fparts = []
    pos = 0
    starts = []
    for b in blocks:
        starts.append(pos)
        pos += len(b)
    for t in orderidx:
        b = blocks[t]
        for i in range(len(b)):
            for j in range(len(b)):
                C[offset + i][offset + j] = b[i][j]
        entries.extend(all_entries[starts[t] : starts[t] + len(b)])
        fparts.extend(all_fparts[starts[t] : starts[t] + len(b)])
        offset += len(b)
    return SolutionBasis(
        chart,
        exps,
        tuple(tuple(row) for row in C),
        tuple(entries),
        tuple(fparts),
    )


def _ladder_solutions(tf, s0, P, nu, mult, rho, order):
    """Jet construction of the mult solutions attached to the root nu."""
    jet_prec = mult + 2 * rho
    coeffs = [LaurentSeries.monomial(1, rho, jet_prec)]
    qpolys = {s - s0: q for s, q in tf.items() if s != s0}
    maxshift = max(qpolys, default=0)
    for n in range(1, order):
        num = LaurentSeries.zero(jet_prec)
        for t in range(1, min(n, maxshift) + 1):
            if t in qpolys:
                qj = LaurentSeries.from_poly(qpolys[t].shift_arg(nu + n - t))
                num = num + coeffs[n - t] * qj
        pj = LaurentSeries.from_poly(P.shift_arg(nu + n))
        if num.is_zero():
            coeffs.append(LaurentSeries.zero(num.precision))
            continue
        if num.valuation < pj.valuation:
            raise DopError("Frobenius obstruction not cleared; internal error")
        coeffs.append(-num * pj.invert(jet_prec + 2))
    base = math.floor(nu)
    out = []
    for q in range(rho, rho + mult):
        logs = {}
        for u in range(q + 1):
            t = q - u
            cs = []
            for n in range(order):
                c = coeffs[n]
                if c.precision != INF and t >= c.precision:
                    raise DopError("jet precision exhausted; internal error")
                cs.append(c.coefficient(t) * Q(math.factorial(q), math.factorial(u)))
            series = LaurentSeries.from_coeffs(cs, valuation=base, precision=base + order)
            if u == 0 or not series.is_zero():
                logs[u] = series
        degree = max((u for u, s in logs.items() if not s.is_zero()), default=0)
        out.append({"root": nu, "q": q, "logdeg": degree, "logs": logs})
    return out


def _solve_nilpotent(sols):
    """Strictly upper triangular N with ksi_i = sum_j f_j (x^N)_{ji}.

    Matching log powers gives, for each i and q >= 1,
    q * g_{i,q} = sum_{l<i} N_{li} g_{l,q-1}; solved exactly column by
    column, minimal solution on underdetermined columns.
    """
    M = len(sols)
    N = [[Q(0)] * M for _ in range(M)]
    for i in range(M):
        si = sols[i]
        if si["logdeg"] == 0:
            continue
        rows = []
        rhs = []
        positions = set()
        for q in range(1, si["logdeg"] + 1):
            lhs = si["logs"].get(q)
            if lhs is None:
                lhs = LaurentSeries.zero(si["logs"][0].precision)
            cols = []
            for ell in range(i):
                g = sols[ell]["logs"].get(q - 1)
                cols.append(g)
            prec = min(
                [lhs.precision] + [g.precision for g in cols if g is not None] or [lhs.precision]
            )
            los = [lhs.valuation] + [g.valuation for g in cols if g is not None]
            lo = min(los)
            if prec == INF:
                hi = max(
                    [lhs.valuation + len(lhs.coeffs)]
                    + [g.valuation + len(g.coeffs) for g in cols if g is not None]
                )
            else:
                hi = prec
            for n in range(lo, hi):
                row = [
                    (g.coefficient(n) if g is not None else Q(0)) for g in cols
                ]
                rows.append(row)
                rhs.append(q * lhs.coefficient(n))
        sol = _solve_exact(rows, rhs)
        if sol is None:
            raise DopError("log-ladder connection system inconsistent; internal error")
        for ell in range(i):
            N[ell][i] = sol[ell]
    return N


def _solve_exact(rows, rhs):
    """Minimal exact solution of a (possibly overdetermined) linear system."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [e / pv for e in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols] != 0:
            return None
    sol = [Q(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return sol


# ---------------------------------------------------------------------------
# dual rows (adjoint solutions from a fundamental matrix)


def dual_row(W, phi: DiffOp, order=None):
    """Last row of a_mu^{-1} (^T W^{-1}) for a fundamental matrix W of phi.

    Each returned entry is annihilated by the adjoint operator to the
    available precision.
    """
    mu = phi.order
    rows = [list(r) for r in W]
    if len(rows) != mu or any(len(r) != mu for r in rows):
        raise MalformedInputError("fundamental matrix has wrong shape")
    if order is None:
        precs = [
            t.series.precision
            for row in rows
            for s in row
            for t in s.terms
        ]
        finite = [p for p in precs if p != INF]
        order = min(finite) if finite else 64
    det = _det_logexp(rows)
    if det.is_zero():
        raise NotInvertibleError("fundamental matrix is singular at this truncation")
    lead_inv = LogExpSeries.from_series(
        series_expand(RatFun(1, phi.leading()), "zero", order), rows[0][0].chart
    )
    unit = LogExpSeries.from_series(LaurentSeries.one(), rows[0][0].chart)
    out = []
    for j in range(mu):
        # (W^-1)_{j, mu-1} = (-1)^(j+mu-1) minor(mu-1, j) / det
        cof = _det_logexp(_minor(rows, mu - 1, j)) if mu > 1 else unit
        sign = -1 if (j + mu - 1) % 2 else 1
        entry = cof.scale(sign).divide_single(det, order)
        out.append(entry * lead_inv)
    return tuple(out)


def _minor(rows, i, j):
    return [
        [e for cj, e in enumerate(r) if cj != j]
        for ci, r in enumerate(rows)
        if ci != i
    ]


def _det_logexp(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        term = rows[0][j] * _det_logexp(_minor(rows, 0, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------------------
# primitive solver (key lemma for the solution-transport argument)


def lemma51_solve(y: LaurentSeries, alpha, k: int, delta, order=None) -> LogExpSeries:
    """Solve d/dx z = y x^alpha (ln x)^k exp(delta/x) at 0.

    Returns z = sum_{i<=k+1} y_i x^alpha (ln x)^i exp(delta/x) with exact
    truncated series y_i; the two branches (delta = 0 closed forms, and
    the delta != 0 two-term recurrences) follow the coefficient relations
    of the ansatz.
    """
    alpha, delta = _q(alpha), _q(delta)
    if k < 0:
        raise MalformedInputError("negative log power")
    if y.precision == INF:
        if order is None:
            raise MalformedInputError("specify order for an exact input series")
        y = y.truncate(order)
    elif order is not None and order < y.precision:
        y = y.truncate(order)
    m = min(0, y.valuation if y.coeffs else 0)
    nmax = y.precision + 1  # a_{i,n} is determined by a_{n-1}
    if delta == 0:
        return _solve_primitive_log(y, alpha, k, m, nmax)
    return _solve_primitive_exp(y, alpha, k, delta, m, nmax)


def _solve_primitive_log(y, alpha, k, m, nmax):
    neg_alpha = None
    if alpha.denominator == 1 and -alpha >= m:
        neg_alpha = -int(alpha)
    layers = []
    prev = None
    for i in range(k, -1, -1):
        cs = []
        for n in range(m, nmax):
            if neg_alpha is not None and n == neg_alpha:
                cs.append(Q(0))
            elif i == k:
                a = y.coefficient(n - 1) if n - 1 >= y.valuation else Q(0)
                cs.append(a / (n + alpha))
            else:
                cs.append(-(i + 1) * prev[n - m] / (n + alpha))
        layers.append((i, cs))
        prev = cs
    terms = [
        LogExpTerm(LaurentSeries.from_coeffs(cs, m, nmax), alpha, i, Q(0))
        for i, cs in layers
    ]
    if neg_alpha is not None:
        top = y.coefficient(neg_alpha - 1) if neg_alpha - 1 >= y.valuation else Q(0)
        terms.append(
            LogExpTerm(
                LaurentSeries.monomial(top / (k + 1), neg_alpha, nmax), alpha, k + 1, Q(0)
            )
        )
    return LogExpSeries.build(terms, "zero")


def _solve_primitive_exp(y, alpha, k, delta, m, nmax):
    size = nmax - m
    top = [Q(0)] * size  # layer k: a_{k,m} = a_{k,m+1} = 0
    for n in range(m, nmax - 2):
        a = y.coefficient(n) if n >= y.valuation else Q(0)
        top[n + 2 - m] = ((n + alpha + 1) * top[n + 1 - m] - a) / delta
    layers = {k: top}
    for i in range(k - 1, -1, -1):
        cur = [Q(0)] * size
        above = layers[i + 1]
        for n in range(m, nmax - 1):
            cur[n + 1 - m] = ((n + alpha) * cur[n - m] + (i + 1) * above[n - m]) / delta
        layers[i] = cur
    terms = [
        LogExpTerm(LaurentSeries.from_coeffs(cs, m, nmax), alpha, i, delta)
        for i, cs in layers.items()
    ]
    return LogExpSeries.build(terms, "zero")
