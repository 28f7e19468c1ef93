"""Command-line front end.

Exit codes: 0 success (or classify: candidate), 1 usage/parse error,
2 classify rejected, 3 classify inconclusive, 4 unsupported feature.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import classify as classify_mod
from . import laplace as laplace_mod
from . import local as local_mod
from . import padic as padic_mod
from . import polygon as polygon_mod
from . import weyl
from .errors import (
    DopError,
    OperatorSyntaxError,
    UnsupportedExponentError,
    UnsupportedSlopeError,
    UnsupportedTermError,
    WrongRegularityError,
)
from .exact import INF, LaurentSeries, Q
from .opparse import format_operator, format_ratfun, parse_operator

_UNSUPPORTED = (
    UnsupportedSlopeError,
    UnsupportedExponentError,
    UnsupportedTermError,
    WrongRegularityError,
)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _series_json(s: LaurentSeries):
    return {
        "valuation": s.valuation if s.coeffs else 0,
        "prec": None if s.precision == INF else s.precision,
        "coeffs": [str(c) for c in s.coeffs],
    }


def _logexp_json(s: weyl.LogExpSeries):
    return {
        "chart": s.chart,
        "terms": [
            {
                "alpha": str(t.alpha),
                "k": t.k,
                "delta": str(t.delta),
                "series": _series_json(t.series),
            }
            for t in s.terms
        ],
    }


def _print_series(s: LaurentSeries, var="x") -> str:
    if s.is_zero():
        return f"O({var}^{s.precision})" if s.precision != INF else "0"
    out = ""
    for i, c in enumerate(s.coeffs):
        if c == 0:
            continue
        e = s.valuation + i
        mag = abs(c)
        if e == 0:
            body = f"{mag}"
        else:
            head = f"{var}" if mag == 1 else f"{mag}*{var}"
            body = head if e == 1 else f"{head}^{e}"
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    if s.precision != INF:
        out += f" + O({var}^{s.precision})"
    return out


def _print_logexp(s: weyl.LogExpSeries) -> str:
    var = "x" if s.chart == "zero" else "w"
    if not s.terms:
        return "0"
    out = []
    for t in s.terms:
        factors = [f"({_print_series(t.series, var)})"]
        if t.alpha:
            factors.append(f"{var}^({t.alpha})")
        if t.k:
            factors.append(f"ln({var})^{t.k}" if t.k > 1 else f"ln({var})")
        if t.delta:
            factors.append(f"exp(({t.delta})/{var})")
        out.append("*".join(factors))
    return " + ".join(out)


def _load_series_csv(path: str) -> LaurentSeries:
    """CSV with header n,numerator,denominator; missing indices are zero."""
    data = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:3]] != [
            "n",
            "numerator",
            "denominator",
        ]:
            raise DopError("series CSV needs the header: n,numerator,denominator")
        for row in reader:
            if not row or not row[0].strip():
                continue
            n = int(row[0])
            data[n] = Q(int(row[1]), int(row[2]))
    if not data:
        raise DopError("series CSV contains no coefficients")
    top = max(data)
    coeffs = [data.get(n, Q(0)) for n in range(min(min(data), 0), top + 1)]
    return LaurentSeries.from_coeffs(coeffs, min(min(data), 0), top + 1)


def _places_from(value: str):
    return tuple(padic_mod.Place(int(p)) for p in value.replace(",", " ").split())


def _default_places():
    env = os.environ.get("DOP_PLACES")
    if env:
        return _places_from(env)
    return padic_mod.DEFAULT_PLACES


def _at(value: str) -> str:
    if value in ("0", "zero"):
        return "zero"
    if value in ("inf", "infinity"):
        return "infinity"
    raise SystemExit(1)


def _emit(args, payload: dict, text_lines):
    if args.json:
        print(json.dumps(payload, indent=None if args.quiet else 2, sort_keys=True))
    elif not args.quiet:
        for line in text_lines:
            print(line)
    else:
        for line in text_lines[:1]:
            print(line)


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="dop", description="exact differential-operator toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--quiet", action="store_true", help="terse output")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (
        ("fourier", "Fourier transform x -> D, D -> -x"),
        ("adjoint", "formal adjoint"),
        ("reflect", "substitute x -> -x"),
        ("invert", "substitute x -> 1/w, clear denominators"),
        ("polygon", "Newton-Ramis polygon"),
        ("companion", "companion matrix"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("operator")
        if name == "fourier":
            p.add_argument("--inverse", action="store_true")

    p = sub.add_parser("exponents", parents=[common], help="local exponents")
    p.add_argument("operator")
    p.add_argument("--at", default="0")

    p = sub.add_parser("solve", parents=[common], help="Frobenius basis")
    p.add_argument("operator")
    p.add_argument("--at", default="0")
    p.add_argument("--order", type=int, default=12)

    p = sub.add_parser("exp-parts", parents=[common], help="exponential parts")
    p.add_argument("operator")
    p.add_argument("--at", default="inf")

    p = sub.add_parser("laplace", parents=[common], help="formal Laplace transform")
    p.add_argument("--alpha", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--order", type=int, default=16)
    p.add_argument("--series", help="CSV file n,numerator,denominator")

    p = sub.add_parser("lemma51", parents=[common], help="primitive of y x^a ln^k x exp(d/x)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--delta", required=True)
    p.add_argument("--order", type=int, default=16)
    p.add_argument("--series", help="CSV file n,numerator,denominator (default y = 1)")

    p = sub.add_parser("padic", parents=[common], help="growth screening of a series")
    p.add_argument("--p", type=int, action="append", required=True)
    p.add_argument("--terms", type=int, default=256)
    p.add_argument("--series", required=True)

    p = sub.add_parser("classify", parents=[common], help="E-operator screening")
    p.add_argument("operator")
    p.add_argument("--places", help="comma-separated primes")
    p.add_argument("--order", type=int, default=240)
    return parser


def _operator_payload(op, cleared=None):
    payload = {
        "operator": format_operator(op),
        "order": op.order,
        "coeffs": [[str(c) for c in p.coeffs] for p in op.coeffs],
    }
    if cleared is not None:
        payload["cleared"] = cleared
    return payload


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except OperatorSyntaxError as exc:
        print(f"dop: parse error: {exc}", file=sys.stderr)
        return 1
    except _UNSUPPORTED as exc:
        print(f"dop: unsupported: {exc}", file=sys.stderr)
        return 4
    except DopError as exc:
        print(f"dop: error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    cmd = args.command
    if cmd in ("fourier", "adjoint", "reflect", "invert"):
        op = parse_operator(args.operator)
        if cmd == "fourier":
            out = weyl.fourier(op, "inverse" if args.inverse else "forward")
            payload = _operator_payload(out)
            lines = [format_operator(out)]
        elif cmd == "adjoint":
            out = weyl.adjoint(op)
            payload = _operator_payload(out)
            lines = [format_operator(out)]
        elif cmd == "reflect":
            out = weyl.reflect(op)
            payload = _operator_payload(out)
            lines = [format_operator(out)]
        else:
            image = weyl.invert_chart(op)
            payload = _operator_payload(image.op, image.cleared)
            lines = [
                format_operator(image.op).replace("x", "w"),
                f"cleared power: w^{image.cleared}",
            ]
        _emit(args, payload, lines)
        return 0

    if cmd == "polygon":
        op = parse_operator(args.operator)
        poly = polygon_mod.nr_polygon(op)
        payload = poly.to_json()
        lines = [
            "vertices: " + " ".join(f"({u},{v})" for u, v in poly.vertices),
            "slopes:   "
            + (
                ", ".join(
                    f"{'inf' if s is None else s} (x{m})" for s, m in poly.slopes
                )
                or "none"
            ),
        ]
        _emit(args, payload, lines)
        return 0

    if cmd == "companion":
        op = parse_operator(args.operator)
        mat = local_mod.companion(op)
        payload = {
            "dim": mat.dim,
            "matrix": [[format_ratfun(e) for e in row] for row in mat.rows],
        }
        lines = ["[" + "  ".join(format_ratfun(e) for e in row) + "]" for row in mat.rows]
        _emit(args, payload, lines)
        return 0

    if cmd == "exponents":
        op = parse_operator(args.operator)
        data = local_mod.exponents(op, _at(args.at))
        payload = data.to_json()
        lines = [
            f"point: {data.point}  regular: {data.regular}",
            "exponents: " + (", ".join(str(e) for e in data.exponents) or "none"),
        ]
        if data.exponent_tokens:
            lines.append("tokens: " + "; ".join(data.exponent_tokens))
        for part in data.delta_parts:
            lines.append(
                f"delta part: delta={part.delta} mult={part.multiplicity}"
                + (f" exponent={part.exponent}" if part.exponent is not None else "")
                + (f" token={part.token}" if part.token else "")
            )
        _emit(args, payload, lines)
        return 0

    if cmd == "solve":
        op = parse_operator(args.operator)
        basis = local_mod.frobenius_solutions(op, _at(args.at), args.order)
        payload = basis.to_json()
        lines = [f"chart: {basis.chart}  exponents: {', '.join(str(e) for e in basis.exponents)}"]
        for i, entry in enumerate(basis.entries):
            lines.append(f"y{i + 1} = {_print_logexp(entry)}")
        lines.append("C = " + json.dumps([[str(c) for c in row] for row in basis.C]))
        _emit(args, payload, lines)
        return 0

    if cmd == "exp-parts":
        op = parse_operator(args.operator)
        data = local_mod.exp_parts(op, _at(args.at))
        payload = data.to_json()
        lines = [f"point: {data.point}  regular: {data.regular}"]
        for part in data.delta_parts:
            lines.append(
                f"exp({part.delta}/t): multiplicity {part.multiplicity}"
                + (f", exponent {part.exponent}" if part.exponent is not None else "")
                + (f", token {part.token}" if part.token else "")
            )
        lines.append("regular exponents: " + (", ".join(str(e) for e in data.exponents) or "none"))
        _emit(args, payload, lines)
        return 0

    if cmd == "laplace":
        alpha = Q(args.alpha)
        if args.series:
            f = _load_series_csv(args.series)
            result = laplace_mod.laplace_series(f, alpha, args.k, args.order)
        else:
            result = laplace_mod.laplace_monomial(alpha, args.k)
        payload = result.to_json()
        lines = [f"prefactor: x^({result.power}); branch: {result.branch}"]
        for j, comps in result.logs:
            for c, s in comps:
                lines.append(
                    f"(ln x)^{j}: constant {c.to_json()} * series {_print_series(s, 'w')}"
                )
        _emit(args, payload, lines)
        return 0

    if cmd == "lemma51":
        if args.series:
            y = _load_series_csv(args.series)
        else:
            y = LaurentSeries.one(args.order)
        z = local_mod.lemma51_solve(y, Q(args.alpha), args.k, Q(args.delta), args.order)
        payload = _logexp_json(z)
        _emit(args, payload, [f"z = {_print_logexp(z)}"])
        return 0

    if cmd == "padic":
        series = _load_series_csv(args.series)
        places = tuple(padic_mod.Place(p) for p in args.p)
        report = padic_mod.e_screen(series, places, args.terms)
        window = max(8, args.terms // 2)
        radii = [
            padic_mod.radius_estimate(
                padic_mod.ValuationProfile.from_series(series, pl, args.terms), window
            )
            for pl in places
        ]
        payload = {"screen": report.to_json(), "radii": [r.to_json() for r in radii]}
        lines = [f"verdict: {report.verdict}"]
        for r in radii:
            lines.append(f"p={r.place.p}: s = {r.s} (N={r.N}, window={r.window})")
        _emit(args, payload, lines)
        return 0

    if cmd == "classify":
        op = parse_operator(args.operator)
        places = _places_from(args.places) if args.places else _default_places()
        report = classify_mod.check_e_conditions(op, places, args.order)
        payload = report.to_json()
        lines = [f"verdict: {report.verdict}"]
        lines += [f"  - {r}" for r in report.reasons]
        lines.append(f"condition 1 (x-dependence): {'pass' if report.condition1 else 'fail'}")
        lines.append(
            f"condition 2 (slopes in {{-1,0}}): {'pass' if report.condition2 else 'fail'}"
            + (f" offending: {', '.join(report.offending_slopes)}" if report.offending_slopes else "")
        )
        lines.append(f"condition 3 (solution shape at infinity): {report.condition3}")
        _emit(args, payload, lines)
        return report.exit_code

    raise SystemExit(1)


if __name__ == "__main__":
    sys.exit(main())
