"""hermix command line: fit, eda, gen, roots.

Exit codes: 0 success, 1 usage or input error, 2 solve failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import eigensolve, mixfit
from .errors import (
    EmptySample,
    HermixError,
    InfeasibleWeights,
    InvalidParameter,
    MalformedLine,
    NonPolynomialParameter,
    ParseError,
    UnknownFamily,
)
from .moments import FAMILY_PARAMS, FamilySpec, Unknown
from .poly import buchberger, format_poly, parse_polys, quotient_basis
from .rng import check_weights, sample_mixture

EXIT_OK, EXIT_USAGE, EXIT_SOLVE = 0, 1, 2

USAGE_ERRORS = (
    ParseError,
    UnknownFamily,
    NonPolynomialParameter,
    InvalidParameter,
    MalformedLine,
    EmptySample,
    InfeasibleWeights,
)

_NUMBER = re.compile(r"[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(/\d+)?$")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


# --------------------------------------------------------------------------
# Input parsing
# --------------------------------------------------------------------------


def parse_family_list(text: str) -> list[FamilySpec]:
    """Parse ``family:key=value,...;family:...``; ``?name`` marks an unknown."""
    specs = []
    pos = 0
    for chunk in text.split(";"):
        start = pos
        pos += len(chunk) + 1
        body = chunk.strip()
        if not body:
            raise ParseError("empty family entry", start)
        offset = start + (len(chunk) - len(chunk.lstrip()))
        name, sep, args = body.partition(":")
        family = name.strip().lower()
        if family not in FAMILY_PARAMS:
            raise UnknownFamily(f"unknown family {name.strip()!r} at position {offset}; "
                                f"expected one of {', '.join(FAMILY_PARAMS)}")
        params = {}
        arg_pos = offset + len(name) + len(sep)
        for item in args.split(",") if args.strip() else []:
            key, eq, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or not key or not value:
                raise ParseError(f"expected key=value, found {item.strip()!r}", arg_pos)
            if key in params:
                raise ParseError(f"parameter {key!r} given twice", arg_pos)
            value_pos = arg_pos + len(item.partition("=")[0]) + 1
            value_pos += len(item[value_pos - arg_pos:]) - len(item[value_pos - arg_pos:].lstrip())
            if value.startswith("?"):
                if not _IDENT.match(value[1:]):
                    raise ParseError(f"bad unknown name {value!r}", value_pos)
                params[key] = Unknown(value[1:])
            elif _NUMBER.match(value):
                params[key] = Fraction(value)
            else:
                raise ParseError(f"bad number {value!r}", value_pos)
            arg_pos += len(item) + 1
        specs.append(FamilySpec.make(family, **params))
    return specs


def parse_weights(text: str) -> list[Fraction]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not _NUMBER.match(item):
            raise ParseError(f"bad weight {item!r}")
        out.append(Fraction(item))
    return out


def read_sample(path) -> list[Fraction]:
    """One value per line; ``#`` comments and a single leading ``value`` header are skipped.

    Values are read exactly as decimal rationals.
    """
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InvalidParameter(f"cannot read {path}: {exc}") from exc
    values = []
    header_allowed = True
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if header_allowed and text.lower() == "value":
            header_allowed = False
            continue
        header_allowed = False
        if not _NUMBER.match(text) or "/" in text:
            raise MalformedLine(number, line)
        values.append(Fraction(text))
    if not values:
        raise EmptySample(f"{path} contains no values")
    return values


# --------------------------------------------------------------------------
# Output formatting
# --------------------------------------------------------------------------


def _num(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    x = float(f"{x:.12g}")
    return 0.0 if x == 0 else x


def _clean(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int,)):
        return obj
    if isinstance(obj, (float, Fraction)):
        return _num(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


def dumps(doc) -> str:
    """JSON with insertion key order and numbers at 12 significant digits."""
    return json.dumps(_clean(doc), indent=2) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _candidate_doc(c: mixfit.SolutionCandidate) -> dict:
    return {
        "weights": list(c.weights),
        "parameters": dict(c.parameters),
        "residual": c.residual,
        "simplex_feasible": c.simplex_feasible,
        "ks": c.ks,
    }


def fit_document(report: mixfit.FitReport) -> dict:
    best = report.best
    diag = {
        "solver_path": report.diagnostics.get("solver_path"),
        "quotient_dimension": report.diagnostics.get("quotient_dimension"),
        "moment_order": report.diagnostics.get("moment_order"),
        "seed": report.diagnostics.get("seed"),
    }
    if "weighting" in report.diagnostics:
        diag["weighting"] = report.diagnostics["weighting"]
    if "eigen_residuals" in report.diagnostics:
        diag["eigen_residuals"] = report.diagnostics["eigen_residuals"]
        diag["complex_solutions"] = report.diagnostics["complex_solutions"]
    doc = {}
    if report.error is not None:
        doc["error"] = report.error
    doc.update({
        "weights": list(best.weights) if best else [],
        "parameters": dict(best.parameters) if best else {},
        "residual": best.residual if best else None,
        "ks": best.ks if best else None,
        "candidates": [_candidate_doc(c) for c in report.candidates],
        "diagnostics": diag,
        "components": report.problem["components"],
        "gram_charlier": report.gram_charlier,
    })
    return doc


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def run_fit(args) -> int:
    sample = read_sample(args.input)
    components = parse_family_list(args.families)
    problem = mixfit.MixtureProblem.from_sample(components, sample, args.moments)
    xs = [float(x) for x in sample]
    report = mixfit.fit(problem, xs, seed=args.seed, real_tol=args.real_tol)
    best = report.best
    if best is None or not best.simplex_feasible:
        report.error = "no simplex-feasible candidate"
        _write(dumps(fit_document(report)), args.output)
        return EXIT_SOLVE
    if args.emit_cdf:
        comps = [c.bind(best.parameters) for c in problem.components]
        cache = mixfit.CdfCache(xs)
        fitted = cache.mixture(comps, best.weights)
        n = len(cache.xs)
        lines = ["x,empirical_cdf,fitted_cdf"]
        lines += [f"{_fmt(x)},{_fmt((i + 1) / n)},{_fmt(F)}" for i, (x, F) in enumerate(zip(cache.xs, fitted))]
        Path(args.emit_cdf).write_text("\n".join(lines) + "\n")
    _write(dumps(fit_document(report)), args.output)
    return EXIT_OK


def run_eda(args) -> int:
    sample = read_sample(args.input)
    pool = parse_family_list(args.pool)
    reports = mixfit.eda_scan(sample, pool, args.subset_size, args.moments, seed=args.seed,
                              workers=args.workers)
    entries = []
    for r in reports:
        best = r.best
        entries.append({
            "components": r.problem["components"],
            "weights": list(best.weights) if best else [],
            "parameters": dict(best.parameters) if best else {},
            "ks": r.best_ks,
            "residual": best.residual if best else None,
            "simplex_feasible": bool(best and best.simplex_feasible),
            "solver_path": r.diagnostics.get("solver_path"),
            "error": r.error if r.error is not None else (
                None if best and best.simplex_feasible else "no simplex-feasible candidate"),
        })
    doc = {
        "reports": entries,
        "diagnostics": {
            "pool_size": len(pool),
            "subset_size": args.subset_size,
            "moment_order": args.moments,
            "sample_size": len(sample),
            "seed": args.seed,
        },
    }
    _write(dumps(doc), args.output)
    return EXIT_OK if any(e["ks"] is not None for e in entries) else EXIT_SOLVE


def run_gen(args) -> int:
    components = parse_family_list(args.families)
    for c in components:
        if not c.is_fixed():
            raise InvalidParameter(f"gen needs fixed parameters: {c.label()}")
    weights = parse_weights(args.weights) if args.weights else [Fraction(1)]
    check_weights(weights, len(components))
    if args.n < 0:
        raise InvalidParameter("--n must be nonnegative")
    values = sample_mixture(components, weights, args.n, seed=args.seed)
    _write("".join(f"{_fmt(v)}\n" for v in values), args.output)
    return EXIT_OK


def _complex_doc(z: complex) -> dict:
    tol = 1e-12 * max(1.0, abs(z))
    re_, im = z.real, z.imag
    return {"re": 0.0 if abs(re_) <= tol else re_, "im": 0.0 if abs(im) <= tol else im}


def _point_doc(variables, p: eigensolve.VarietyPoint) -> dict:
    return {
        "coordinates": {v: _complex_doc(z) for v, z in zip(variables, p.coordinates)},
        "multiplicity": p.multiplicity,
        "residual": p.residual,
    }


def _point_key(p):
    return tuple(
        (float(f"{z.real:.9g}"), float(f"{z.imag:.9g}")) for z in p.coordinates
    )


def run_roots(args) -> int:
    polys = parse_polys(args.poly)
    variables = list(polys[0].ring)
    if not variables:
        raise ParseError("the system has no variables")
    G = buchberger(polys)
    beta = quotient_basis(G)
    points = eigensolve.solve_variety(G, beta, seed=args.seed, real_tol=args.real_tol)
    points = [
        eigensolve.VarietyPoint(p.coordinates, eigensolve.point_residual(polys, p.coordinates), p.is_real,
                                p.multiplicity)
        for p in points
    ]
    points.sort(key=_point_key)
    real = eigensolve.filter_real(points, args.real_tol, polys)
    doc = {
        "solutions": [_point_doc(variables, p) for p in points],
        "real_solutions": [_point_doc(variables, p) for p in real],
        "quotient_dimension": len(beta),
        "variables": variables,
        "groebner_basis": [format_poly(g, G.order) for g in G],
        "seed": args.seed,
    }
    _write(dumps(doc), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hermix", description="Heterogeneous mixture fitting by moment matching and ideals.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit mixture weights (and unknown parameters) to a sample")
    p.add_argument("--input", required=True)
    p.add_argument("--families", required=True)
    p.add_argument("--moments", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-cdf", default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--real-tol", type=float, default=eigensolve.REAL_TOL)
    p.set_defaults(func=run_fit)

    p = sub.add_parser("eda", help="fit every size-k subset of a family pool")
    p.add_argument("--input", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--subset-size", type=int, required=True)
    p.add_argument("--moments", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=run_eda)

    p = sub.add_parser("gen", help="draw a sample from a fixed mixture")
    p.add_argument("--families", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=run_gen)

    p = sub.add_parser("roots", help="solve a zero-dimensional polynomial system")
    p.add_argument("--poly", action="append", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real-tol", type=float, default=eigensolve.REAL_TOL)
    p.add_argument("--output", default=None)
    p.set_defaults(func=run_roots)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        sys.stderr.write(f"hermix: error: {exc}\n")
        return EXIT_USAGE
    except HermixError as exc:
        _write(dumps({"error": str(exc), "error_type": type(exc).__name__}), getattr(args, "output", None))
        return EXIT_SOLVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
