"""Command-line front end; every run prints one JSON report on stdout.

Exit status: 0 on success, 2 on a precondition violation (including bad
input documents), 3 on a numerical breakdown.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .annihilator import DIV_TOL, RANK_TOL, minpoly_up_to_degree, verify_annihilates
from .documents import (
    complex_pair,
    ext_pair,
    map_from_univariate,
    map_to_document,
    parse_map,
    parse_poly,
    poly_to_document,
    univariate,
)
from .errors import NumericalBreakdownError, PreconditionError
from .jets import PolyMap, iterate_jets, jet_compose
from .orthogonal import STAGE_TOL, solve_about_c
from .spectral import (
    CLUSTER_TOL,
    REGIME_TOL,
    build_char_jet_poly,
    classify_regime,
    decompose_expanding,
    eigenvalues,
    linear_part,
)
from .univar import (
    conjugate_to_origin,
    fixed_points,
    residue_terms,
    select_nonattracting,
)

VERIFY_TOL = 1e-8
EXIT_OK, EXIT_PRECONDITION, EXIT_BREAKDOWN = 0, 2, 3


def _clean(x):
    """JSON-safe copy: non-finite floats become strings, tuples lists."""
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, complex):
        return _clean(complex_pair(x))
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        return _clean(x.item())
    return x


def _factors(fp) -> list[dict]:
    return [{"root": complex_pair(r), "multiplicity": m} for r, m in fp.factors]


def _tolerances(args) -> dict:
    return {
        "tol": args.tol,
        "rank_tol": args.rank_tol,
        "cluster_tol": args.cluster_tol,
        "stage_tol": args.stage_tol,
        "div_tol": DIV_TOL,
        "verify_tol": VERIFY_TOL,
    }


def cmd_classify(F: PolyMap, args) -> dict:
    spec = eigenvalues(linear_part(F), cluster_tol=args.cluster_tol)
    verdict = classify_regime(spec, F.is_nonlinear(), F.is_zero(), args.tol)
    return {"verdict": verdict.as_dict(), "eigenvalues": [complex_pair(l) for l in spec.eigenvalues]}


def cmd_charpoly(F: PolyMap, args) -> dict:
    spec = eigenvalues(linear_part(F), cluster_tol=args.cluster_tol)
    chi = build_char_jet_poly(spec, args.degree)
    poly = chi.expand()
    return {
        "degree": args.degree,
        "factors": _factors(chi),
        "coeffs": [complex_pair(c) for c in poly.coeffs],
        "annihilation_residual": verify_annihilates(poly, F, args.degree),
    }


def cmd_minpoly(F: PolyMap, args) -> dict:
    rep = minpoly_up_to_degree(
        F, args.degree, N=args.iters, rank_tol=args.rank_tol, cluster_tol=args.cluster_tol
    )
    out = rep.as_dict()
    out["coeffs"] = out.pop("minimal")
    out["degree"] = args.degree
    return out


def cmd_iterate(F: PolyMap, args) -> dict:
    its = iterate_jets(F, args.degree, args.count)
    return {"degree": args.degree, "iterates": [map_to_document(it) for it in its]}


def cmd_verify(F: PolyMap, args) -> dict:
    P = parse_poly(Path(args.poly).read_bytes())
    res = verify_annihilates(P, F, args.degree)
    return {
        "degree": args.degree,
        "poly": poly_to_document(P),
        "poly_sha256": hashlib.sha256(Path(args.poly).read_bytes()).hexdigest(),
        "residual": res,
        "annihilates": res < VERIFY_TOL,
    }


def cmd_fixpoints(F: PolyMap, args) -> dict:
    f = univariate(F)
    fps = fixed_points(f, args.tol)
    out = {
        "fixed_points": [fp.as_dict() for fp in fps],
        "selected": select_nonattracting(f, args.tol).as_dict(),
    }
    try:
        total, scale = residue_terms(f, args.tol)
        out["residue_sum"] = {"value": complex_pair(total), "scale": scale}
    except PreconditionError as exc:
        out["residue_sum"] = {"value": None, "note": str(exc)}
    return out


def cmd_conjugate(F: PolyMap, args) -> dict:
    f = univariate(F)
    if args.shift is not None:
        w = complex(*args.shift)
        chosen = None
    else:
        fp = select_nonattracting(f, args.tol)
        w, chosen = fp.location, fp.as_dict()
    g = conjugate_to_origin(f, w)
    return {"shift": complex_pair(w), "fixed_point": chosen, "map": map_to_document(map_from_univariate(g))}


def cmd_decompose(F: PolyMap, args) -> dict:
    A, G = decompose_expanding(F, s=args.scale)
    back = jet_compose(A.inverse().as_polymap(), G, max(F.cap, 1))
    err = (back - F).max_abs() if not (back - F).is_zero() else 0.0
    spec = eigenvalues(linear_part(G), cluster_tol=args.cluster_tol)
    verdict = classify_regime(spec, G.is_nonlinear(), G.is_zero(), args.tol)
    return {
        "scale": args.scale,
        "affine": {
            "matrix": [[complex_pair(x) for x in row] for row in A.matrix],
            "offset": [complex_pair(x) for x in A.offset],
        },
        "G": map_to_document(G),
        "round_trip_error": err,
        "G_verdict": verdict.as_dict(),
    }


def cmd_solve1d(F: PolyMap, args) -> dict:
    f = univariate(F)
    rep = solve_about_c(f, args.rows, args.cols, args.radius, trials=args.trials, stage_tol=args.stage_tol)
    out = rep.as_dict()
    out["coefficients"] = {
        str(i): ext_pair(a) for i, a in sorted(rep.solution.coefficients.items())
    }
    return out


COMMANDS = {
    "classify": cmd_classify,
    "charpoly": cmd_charpoly,
    "minpoly": cmd_minpoly,
    "iterate": cmd_iterate,
    "verify": cmd_verify,
    "fixpoints": cmd_fixpoints,
    "conjugate": cmd_conjugate,
    "decompose": cmd_decompose,
    "solve1d": cmd_solve1d,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="map file (JSON)")
    common.add_argument("--tol", type=float, default=REGIME_TOL, help="decision tolerance")
    common.add_argument("--rank-tol", type=float, default=RANK_TOL)
    common.add_argument("--cluster-tol", type=float, default=CLUSTER_TOL)
    common.add_argument("--stage-tol", type=float, default=STAGE_TOL)

    parser = argparse.ArgumentParser(prog="seriesroot", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="eigenvalue regime verdict")
    p = sub.add_parser("charpoly", parents=[common], help="characteristic jet polynomial")
    p.add_argument("--degree", type=int, required=True)
    p = sub.add_parser("minpoly", parents=[common], help="minimal vanishing polynomial")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--iters", type=int, default=None)
    p = sub.add_parser("iterate", parents=[common], help="truncated iterates")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p = sub.add_parser("verify", parents=[common], help="check that a polynomial vanishes on the map")
    p.add_argument("--poly", required=True)
    p.add_argument("--degree", type=int, required=True)
    sub.add_parser("fixpoints", parents=[common], help="fixed points of a one-variable map")
    p = sub.add_parser("conjugate", parents=[common], help="move a fixed point to the origin")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--to-fixed-point", action="store_true", help="shift the selected non-attracting point (default)")
    g.add_argument("--shift", type=float, nargs=2, metavar=("RE", "IM"))
    p = sub.add_parser("decompose", parents=[common], help="F = A^-1 o G with G expanding")
    p.add_argument("--scale", type=float, default=2.0)
    p = sub.add_parser("solve1d", parents=[common], help="series coefficients about a shifted center")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--trials", type=int, default=64)
    return parser


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    report = {
        "command": list(argv if argv is not None else sys.argv[1:]),
        "input_sha256": None,
        "result": None,
        "tolerances": _tolerances(args),
        "version": __version__,
    }
    code = EXIT_OK
    try:
        raw = Path(args.input).read_bytes()
        report["input_sha256"] = hashlib.sha256(raw).hexdigest()
        F = parse_map(raw)
        report["result"] = COMMANDS[args.command](F, args)
    except OSError as exc:
        code = EXIT_PRECONDITION
        report["error"] = {"kind": "io", "message": f"{exc.strerror}: {exc.filename}"}
    except PreconditionError as exc:
        code = EXIT_PRECONDITION
        report["error"] = {"kind": "precondition", "message": str(exc)}
    except NumericalBreakdownError as exc:
        code = EXIT_BREAKDOWN
        report["error"] = {"kind": "numerical_breakdown", "message": str(exc)}
    report["exit_code"] = code
    return code, _clean(report)


def main(argv: list[str] | None = None) -> int:
    code, report = run(argv)
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if code:
        sys.stderr.write(f"seriesroot: {report['error']['message']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
