"""Command line front end.

Exit codes: 0 success, 2 malformed input, 3 validation failure
(e.g. a degenerate simplex), 4 oracle refused without --force.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .driver import check_indicator_identity, probe_vectors, top_coefficients
from .lattice import saturate
from .oracle import count_points, fit_quasipolynomial
from .polytope import NotFullDimensional, Simplex
from .slices import SlicePlan

EXIT_MALFORMED = 2
EXIT_INVALID = 3
EXIT_REFUSED = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _rat(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ValueError(f"not an exact rational: {x!r}")
    return Fraction(x)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise CliError(EXIT_MALFORMED, f"{path}: invalid JSON: {e}")


def load_simplex(path: str) -> Simplex:
    data = _load_json(path)
    try:
        d = int(data["dim"])
        verts = [tuple(_rat(x) for x in v) for v in data["vertices"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise CliError(EXIT_MALFORMED, f"{path}: malformed simplex: {e}")
    if d < 1 or len(verts) != d + 1 or any(len(v) != d for v in verts):
        raise CliError(EXIT_MALFORMED, f"{path}: expected {d + 1} vertices with {d} coordinates")
    try:
        return Simplex(tuple(verts))
    except NotFullDimensional:
        raise CliError(EXIT_INVALID, "simplex not full-dimensional")


def load_subspace(path: str, d: int):
    data = _load_json(path)
    try:
        dim = int(data.get("dim", d))
        basis = [tuple(_rat(x) for x in v) for v in data["basis"]]
    except (KeyError, TypeError, ValueError, AttributeError, ZeroDivisionError) as e:
        raise CliError(EXIT_MALFORMED, f"{path}: malformed subspace: {e}")
    if dim != d or any(len(v) != d for v in basis):
        raise CliError(EXIT_INVALID, f"{path}: subspace must live in R^{d}")
    return saturate(basis, d)


def _emit(report: dict, output: Optional[str]):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_coeff(args) -> dict:
    simplex = load_simplex(args.input)
    d = simplex.dim
    if not 0 <= args.k <= d:
        raise CliError(EXIT_INVALID, f"k must lie in 0..{d}")
    if args.n < 1:
        raise CliError(EXIT_INVALID, "n must be positive")
    if args.k > 3:
        print(f"warning: k = {args.k} builds a large subspace poset", file=sys.stderr)
    jobs = args.jobs or os.cpu_count() or 1
    rep = top_coefficients(simplex, args.k, args.n, jobs=jobs)
    report = {
        "d": rep.d, "k": rep.k, "n": rep.n, "t": rep.t,
        "coefficients": [{"i": i, "value": str(rep.coefficients[i])} for i in range(rep.k + 1)],
        "poset_size": rep.poset_size,
        "moebius_check": check_indicator_identity(
            rep.poset, probe_vectors(d, subspaces=rep.poset.elements)),
    }
    if not args.no_timings:
        report["timings"] = {k: round(v, 6) for k, v in rep.timings.items()}
    return report


def cmd_el(args) -> dict:
    simplex = load_simplex(args.input)
    L = load_subspace(args.subspace, simplex.dim)
    plan = SlicePlan.build(simplex, L)
    return {
        "d": simplex.dim,
        "dim_L": L.dim,
        "value": str(plan.value(1)),
        "chambers": len(plan.pieces),
        "open_pieces": len(plan.open_faces),
        "phi_degrees": [p.phi.degree for p in plan.pieces],
    }


def cmd_count(args) -> dict:
    simplex = load_simplex(args.input)
    if args.n < 1:
        raise CliError(EXIT_INVALID, "n must be positive")
    return {"d": simplex.dim, "n": args.n, "count": count_points(simplex, args.n)}


def cmd_oracle(args) -> dict:
    simplex = load_simplex(args.input)
    if simplex.dim > 7 and not args.force:
        raise CliError(EXIT_REFUSED, "refusing to enumerate in dimension > 7 without --force")
    fit = fit_quasipolynomial(simplex, args.k)
    return {
        "d": simplex.dim, "t": fit.t,
        "table": [{"n": r, "coefficients": [{"i": i, "value": str(c)} for i, c in enumerate(vals)]}
                  for r, vals in sorted(fit.values.items())],
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ehrhart",
                                description="Exact top Ehrhart coefficients of rational simplices.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeff", help="top k+1 coefficients e_{d-i}(n), i = 0..k")
    c.add_argument("input")
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    c.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    c.add_argument("--output")
    c.set_defaults(func=cmd_coeff)

    e = sub.add_parser("el", help="the slice valuation E_L of the simplex")
    e.add_argument("input")
    e.add_argument("subspace", help='JSON {"dim": d, "basis": [[...], ...]}')
    e.add_argument("--output")
    e.set_defaults(func=cmd_el)

    n = sub.add_parser("count", help="lattice points of the n-th dilate by enumeration")
    n.add_argument("input")
    n.add_argument("--n", type=int, default=1)
    n.add_argument("--output")
    n.set_defaults(func=cmd_count)

    o = sub.add_parser("oracle", help="full quasi-polynomial by enumeration and fitting")
    o.add_argument("input")
    o.add_argument("--k", type=int, default=None)
    o.add_argument("--force", action="store_true")
    o.add_argument("--output")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    _emit(report, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
