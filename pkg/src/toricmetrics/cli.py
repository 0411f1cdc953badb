"""Command-line interface.

Subcommands wrap the library operations on polytope/potential JSON files and
emit machine-readable JSON (scalar reports) or CSV (grids).  Exit codes are
stable per failure class:

    0  success
    1  input or computation error (bad file, point not interior, ...)
    2  polytope is not Delzant
    3  metric is not extremal
    4  total-curvature identity violated

The environment variable ``ABREU_MAX_SUBDIV`` overrides the quadrature
subdivision cap used by the ``identity`` subcommand.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import calabi as calabi_mod
from .curvature import affine_fit, curvature_grid, scalar_curvature
from .errors import ToricError
from .identity import check_identity
from .polytope import check_delzant, parse_polytope, volume
from .potential import SymplecticPotential, parse_potential

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_DELZANT = 2
EXIT_NOT_EXTREMAL = 3
EXIT_IDENTITY = 4


class _InputError(Exception):
    pass


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc


def _load_polytope(path):
    return parse_polytope(_read(path))


def _load_potential(path, p):
    try:
        pert = parse_potential(_read(path), p.dim)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    return SymplecticPotential(polytope=p, perturbation=pert)


def _max_subdiv():
    raw = os.environ.get("ABREU_MAX_SUBDIV")
    if raw is None:
        return None
    try:
        levels = int(raw)
        if levels < 0:
            raise ValueError
    except ValueError:
        raise _InputError(f"ABREU_MAX_SUBDIV must be a nonnegative integer, got {raw!r}") from None
    return levels


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for key, val in obj.items():
            _flatten(f"{prefix}.{key}" if prefix else key, val, rows)
    elif isinstance(obj, list):
        rows.append((prefix, ";".join(_csv_scalar(v) for v in obj)))
    else:
        rows.append((prefix, _csv_scalar(obj)))


def _csv_scalar(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit_report(payload, output):
    if output == "csv":
        rows = []
        _flatten("", payload, rows)
        print("\n".join(f"{k},{v}" for k, v in rows))
    else:
        print(json.dumps(payload))


def _emit_grid(columns, rows, output):
    if output == "json":
        print(json.dumps({"columns": columns, "rows": rows}))
    else:
        lines = [",".join(columns)]
        lines += [",".join(f"{v:.17g}" for v in row) for row in rows]
        print("\n".join(lines))


def _fit_payload(fit):
    return {
        "gradient": [float(g) for g in fit.gradient],
        "constant": fit.constant,
        "max_residual": fit.max_residual,
        "is_extremal": fit.is_extremal,
    }


# -- subcommands -------------------------------------------------------------


def cmd_validate(args):
    p = _load_polytope(args.polytope)
    report = check_delzant(p)
    _emit_report(
        {
            "is_delzant": report.is_delzant,
            "failures": [[i, reason] for i, reason in report.failures],
        },
        args.output,
    )
    return EXIT_OK if report.is_delzant else EXIT_NOT_DELZANT


def cmd_volume(args):
    p = _load_polytope(args.polytope)
    _emit_report({"volume": volume(p)}, args.output)
    return EXIT_OK


def cmd_curvature(args):
    p = _load_polytope(args.polytope)
    pot = _load_potential(args.potential, p)
    if args.point is not None:
        if len(args.point) != p.dim:
            raise _InputError(f"--point needs {p.dim} coordinates")
        y = np.array(args.point, dtype=float)
        if not p.contains(y, margin=0.0):
            raise _InputError(f"point {args.point} not interior to the polytope")
        _emit_report({"point": args.point, "R": scalar_curvature(pot, y)}, args.output)
        return EXIT_OK
    samples = curvature_grid(pot, args.grid)
    columns = [f"y{k + 1}" for k in range(p.dim)] + ["R"]
    rows = [[*map(float, pt), r] for pt, r in samples]
    _emit_grid(columns, rows, args.output if args.output else "csv")
    return EXIT_OK


def cmd_extremal(args):
    p = _load_polytope(args.polytope)
    pot = _load_potential(args.potential, p)
    fit = affine_fit(curvature_grid(pot, args.density), threshold=args.threshold)
    _emit_report(_fit_payload(fit), args.output)
    return EXIT_OK if fit.is_extremal else EXIT_NOT_EXTREMAL


def cmd_identity(args):
    p = _load_polytope(args.polytope)
    pot = _load_potential(args.potential, p)
    report = check_identity(p, pot, tol=args.tol, max_levels=_max_subdiv())
    _emit_report(report.to_dict(), args.output)
    return EXIT_OK if report.abs_error < max(10.0 * args.tol, 1e-4) else EXIT_IDENTITY


def cmd_calabi(args):
    try:
        pot = calabi_mod.calabi_potential(args.a)
        c1, c2 = calabi_mod.calabi_constants(args.a)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    fit = affine_fit(curvature_grid(pot, args.density), threshold=args.threshold)
    _emit_report(
        {"a": args.a, "c1": c1, "c2": c2, "fit": _fit_payload(fit)},
        args.output,
    )
    return EXIT_OK if fit.is_extremal else EXIT_NOT_EXTREMAL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toricmetrics",
        description="Curvature of toric Kahler metrics from moment-polytope data",
    )
    parser.add_argument("--output", choices=["json", "csv"], default=None,
                        help="payload format (default: JSON for reports, CSV for grids)")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check the Delzant conditions")
    sp.add_argument("polytope")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("volume", help="Euclidean volume of the polytope")
    sp.add_argument("polytope")
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("curvature", help="scalar curvature at a point or on a grid")
    sp.add_argument("polytope")
    sp.add_argument("potential")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--point", type=float, nargs="+", metavar="Y")
    group.add_argument("--grid", type=int, metavar="N")
    sp.set_defaults(func=cmd_curvature)

    sp = sub.add_parser("extremal", help="affine-fit extremality verdict")
    sp.add_argument("polytope")
    sp.add_argument("potential")
    sp.add_argument("--density", type=int, default=8)
    sp.add_argument("--threshold", type=float, default=None)
    sp.set_defaults(func=cmd_extremal)

    sp = sub.add_parser("identity", help="total-curvature identity check")
    sp.add_argument("polytope")
    sp.add_argument("potential")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.set_defaults(func=cmd_identity)

    sp = sub.add_parser("calabi", help="extremal blow-up family end to end")
    sp.add_argument("--a", type=float, required=True, metavar="A")
    sp.add_argument("--density", type=int, default=8)
    sp.add_argument("--threshold", type=float, default=None)
    sp.set_defaults(func=cmd_calabi)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_InputError, ToricError, ValueError) as exc:
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
