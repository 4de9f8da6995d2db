"""Batch command line front end: JSON documents in, JSON or CSV out.

Subcommands map one-to-one onto the library operations:

* analyze   - arrangement admissibility, tangent cones and invariants
* valuation - curve-germ densities, optimizer cross-check, angle sweeps
* cp1       - flat metrics on the line: regime, area, period, polygon
* cone      - indicial roots, separated modes, radial solves, exponents

Exit codes: 0 success; 1 malformed input; 2 admissibility failure
(non-klt / unstable / wrong regime), with a partial report where possible;
3 numerical failure.  Output is byte-identical for identical input, seed
and tolerance; CONEKIT_THREADS only caps internal parallelism.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import arrangement as arrmod
from . import cone_lab, invariants, pk_cone, valuations
from . import cp1 as cp1mod
from .errors import (
    ConekitError,
    DuplicateLine,
    InvalidEigenvalue,
    InvalidGerm,
    InvalidMode,
    NonKlt,
    NotCY,
    NotGeneric,
    NotProduct,
    NotStable,
    NumericFailure,
    OutOfModel,
    ParseError,
    PathTooClose,
    UnsupportedCone,
    WeightOutOfRange,
)
from .exact import fmt_rational, num_json, parse_number, parse_rational

INPUT_ERRORS = (
    ParseError,
    DuplicateLine,
    WeightOutOfRange,
    InvalidGerm,
    InvalidEigenvalue,
    InvalidMode,
    UnsupportedCone,
    NotProduct,
)
ADMISSIBILITY_ERRORS = (NonKlt, NotStable, NotGeneric, NotCY, OutOfModel)
NUMERIC_ERRORS = (NumericFailure, PathTooClose)

OPTIMIZER_TOL = 1e-9
QUADRATURE_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # malformed command lines are input errors, exit code 1
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit_csv(rows: list[dict], fieldnames: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _load_document(args) -> dict:
    if args.inline is not None:
        text = args.inline
    elif args.input is not None:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ParseError("provide --input FILE or --inline JSON")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


# --- analyze ---------------------------------------------------------------


def _point_rows(report):
    rows = []
    for idx, entry in enumerate(report.points):
        mp = entry.point
        rows.append(
            {
                "index": idx,
                "location": [fmt_rational(c) for c in mp.location],
                "incident": list(mp.incident),
                "multiplicity": mp.multiplicity,
                "klt": entry.klt,
                "troyanov": entry.troyanov,
                "regime": entry.regime,
                "spherical_liftable": entry.spherical_liftable,
            }
        )
    return rows


def cmd_analyze(args) -> tuple[dict, int]:
    arr = arrmod.parse_arrangement(_load_document(args))
    report = arrmod.regime_report(arr)
    doc = {
        "arrangement": arrmod.serialize_arrangement(arr),
        "global_regime": report.global_regime,
        "points": _point_rows(report),
        "seed": args.seed,
        "tol": args.tol if args.tol is not None else OPTIMIZER_TOL,
    }
    try:
        cones = [
            pk_cone.cone_at_point(e.point, arr) for e in report.points
        ]
    except NotStable as exc:
        doc["cones"] = None
        doc["invariants"] = None
        doc["error"] = {"class": type(exc).__name__, "message": str(exc)}
        return doc, 2
    for row, cone in zip(doc["points"], cones):
        row["cone"] = pk_cone.cone_json(cone)
    doc["invariants"] = invariants.report_json(invariants.invariant_report(arr))
    return doc, 0


def _analyze_csv(doc: dict) -> str:
    rows = []
    for row in doc["points"]:
        rows.append(
            {
                "record": "point",
                "key": row["index"],
                "detail": ";".join(row["location"]),
                "regime": row["regime"],
                "exact": (row.get("cone") or {}).get("density", {}).get("exact"),
                "float": (row.get("cone") or {}).get("density", {}).get("float"),
            }
        )
    inv = doc.get("invariants") or {}
    for key in sorted(inv):
        val = inv[key]
        if isinstance(val, dict) and "exact" in val:
            rows.append(
                {
                    "record": "invariant",
                    "key": key,
                    "detail": "",
                    "regime": doc["global_regime"],
                    "exact": val["exact"],
                    "float": val["float"],
                }
            )
    return _emit_csv(rows, ["record", "key", "detail", "regime", "exact", "float"])


# --- valuation -------------------------------------------------------------


def cmd_valuation(args) -> tuple[dict | str, int]:
    tol = args.tol if args.tol is not None else OPTIMIZER_TOL
    if args.kind == "ak":
        if args.k is None:
            raise ParseError("--kind ak needs --k")
        lo, hi = valuations.ak_stable_range(args.k)
        return {
            "kind": "ak",
            "k": args.k,
            "stable_range": [fmt_rational(lo), fmt_rational(hi)],
            "seed": args.seed,
        }, 0
    if args.kind == "irreducible":
        if args.d is None or args.e is None or (args.beta is None and not args.sweep):
            raise ParseError("--kind irreducible needs --d, --e and --beta (or --sweep)")
        if args.sweep:
            return _sweep_csv(args.d, args.e, args.sweep), 0
        beta = parse_number(args.beta)
        res = valuations.density_irreducible(args.d, args.e, beta)
        doc = valuations.result_json(res)
        if res.regime != valuations.COLLAPSED:
            opt = valuations.minimize_F(args.d, args.e, beta, tol)
            doc["optimizer"] = {
                "min_value": opt.min_value,
                "minimizer_ray": opt.minimizer_ray,
                "tol": tol,
            }
        doc.update({"kind": "irreducible", "d": args.d, "e": args.e, "seed": args.seed})
        return doc, 0
    if args.kind == "ordinary":
        if not args.betas:
            raise ParseError("--kind ordinary needs --betas p/q,p/q,...")
        betas = [parse_number(b) for b in args.betas.split(",")]
        res = valuations.density_ordinary(betas)
        doc = valuations.result_json(res)
        doc.update({"kind": "ordinary", "seed": args.seed})
        return doc, 0
    if args.kind == "tangent-pair":
        if args.beta1 is None or args.beta2 is None:
            raise ParseError("--kind tangent-pair needs --beta1 and --beta2")
        res = valuations.classify_tangent_pair(
            parse_number(args.beta1), parse_number(args.beta2)
        )
        doc = valuations.result_json(res)
        doc.update({"kind": "tangent-pair", "seed": args.seed})
        return doc, 0
    raise ParseError(f"unknown germ kind {args.kind!r}")


def _sweep_csv(d: int, e: int, count: int) -> str:
    wall = 1 - valuations.lct_irreducible(d, e)
    threshold = valuations.beta_star(d, e)
    rows = []
    for i in range(1, count + 1):
        beta = wall + Fraction(i, count + 1) * (1 - wall)
        res = valuations.density_irreducible(d, e, beta)
        rows.append(
            {
                "beta": fmt_rational(beta),
                "density": float(res.density),
                "regime": res.regime,
                "minimizer_ray": float(res.minimizer_ray),
                "jump_threshold": fmt_rational(threshold),
            }
        )
    return _emit_csv(rows, ["beta", "density", "regime", "minimizer_ray", "jump_threshold"])


# --- cp1 ---------------------------------------------------------------------


def cmd_cp1(args) -> tuple[dict | str, int]:
    tol = args.tol if args.tol is not None else QUADRATURE_TOL
    cfg = cp1mod.parse_config(_load_document(args))
    if args.op == "regime":
        regime = cp1mod.classify_regime(cfg)
        return {
            "op": "regime",
            "kind": regime.kind,
            "gamma": num_json(regime.gamma) if regime.gamma is not None else None,
            "beta_infinity": num_json(regime.beta_infinity)
            if regime.beta_infinity is not None
            else None,
            "seed": args.seed,
        }, 0
    if args.op == "area":
        res = cp1mod.area(cfg, tol)
        return {
            "op": "area",
            "area": res.value,
            "error_estimate": res.error_estimate,
            "tol": tol,
            "seed": args.seed,
        }, 0
    if args.op == "period":
        if args.from_index is None or args.to_index is None:
            raise ParseError("--op period needs --from and --to")
        path = cp1mod.make_path(cfg, args.from_index, args.to_index)
        res = cp1mod.period(cfg, path, tol)
        return {
            "op": "period",
            "value": [res.value.real, res.value.imag],
            "abs": res.length,
            "error_estimate": res.error_estimate,
            "clearance": path.clearance,
            "tol": tol,
            "seed": args.seed,
        }, 0
    if args.op == "polygon":
        poly = cp1mod.sc_polygon(cfg, tol)
        return {
            "op": "polygon",
            "vertices": [[v.real, v.imag] for v in poly.vertices],
            "closure_defect": poly.closure_defect,
            "error_estimate": poly.error_estimate,
            "tol": tol,
            "seed": args.seed,
        }, 0
    raise ParseError(f"unknown cp1 op {args.op!r}")


def _cp1_csv(doc: dict) -> str:
    if doc["op"] == "polygon":
        rows = [
            {"index": i, "re": v[0], "im": v[1]}
            for i, v in enumerate(doc["vertices"])
        ]
        return _emit_csv(rows, ["index", "re", "im"])
    rows = [{k: v for k, v in sorted(doc.items()) if not isinstance(v, list)}]
    return _emit_csv(rows, sorted(rows[0]))


# --- cone --------------------------------------------------------------------


def cmd_cone(args) -> tuple[dict, int]:
    if args.op == "indicial":
        if args.lam is None:
            raise ParseError("--op indicial needs --lam")
        pair = cone_lab.indicial_roots(parse_number(args.lam))
        return {
            "op": "indicial",
            "lam": num_json(pair.lam),
            "delta_plus": num_json(pair.delta_plus),
            "delta_minus": num_json(pair.delta_minus),
            "seed": args.seed,
        }, 0
    if args.op == "mode":
        if args.beta is None or args.k is None or args.s is None:
            raise ParseError("--op mode needs --beta, --k and --s")
        sol = cone_lab.mode_solution_2d(
            cone_lab.ModeProblem(parse_number(args.beta), args.k, parse_number(args.s))
        )
        return {
            "op": "mode",
            "exponent": num_json(sol.exponent),
            "coefficient": num_json(sol.coefficient),
            "resonant": sol.resonant,
            "seed": args.seed,
        }, 0
    if args.op == "radial":
        if args.lam is None:
            raise ParseError("--op radial needs --lam")
        source = None
        if args.source_const is not None:
            const = float(args.source_const)
            source = lambda r: const  # noqa: E731
        prof = cone_lab.radial_solve(
            float(parse_number(args.lam)),
            args.r0,
            args.r1,
            args.u0,
            args.u1,
            source=source,
            num_points=args.samples,
        )
        return {
            "op": "radial",
            "delta_plus": prof.delta_plus,
            "delta_minus": prof.delta_minus,
            "condition": prof.condition,
            "r": [float(v) for v in prof.r],
            "u": [float(v) for v in prof.u],
            "seed": args.seed,
        }, 0
    if args.op == "exponents":
        if args.beta is None:
            raise ParseError("--op exponents needs --beta")
        entries = cone_lab.greens_exponents(
            parse_number(args.beta), args.j_max, args.k_max
        )
        return {
            "op": "exponents",
            "entries": [
                {"value": num_json(en.value), "j": en.j, "k": en.k} for en in entries
            ],
            "seed": args.seed,
        }, 0
    if args.op == "scaling":
        power = float(args.power)
        check = cone_lab.scaling_identity_check(
            lambda r: r**power, float(args.lambda_scale), args.r0, args.r1, args.samples
        )
        return {
            "op": "scaling",
            "max_residual": check.max_residual,
            "bound": check.bound,
            "max_spacing": check.max_spacing,
            "seed": args.seed,
        }, 0
    raise ParseError(f"unknown cone op {args.op!r}")


def _cone_csv(doc: dict) -> str:
    if doc["op"] == "radial":
        rows = [{"r": r, "u": u} for r, u in zip(doc["r"], doc["u"])]
        return _emit_csv(rows, ["r", "u"])
    if doc["op"] == "exponents":
        rows = [
            {"value": en["value"]["float"], "j": en["j"], "k": en["k"]}
            for en in doc["entries"]
        ]
        return _emit_csv(rows, ["value", "j", "k"])
    rows = [{k: v for k, v in sorted(doc.items()) if not isinstance(v, (list, dict))}]
    return _emit_csv(rows, sorted(rows[0]))


# --- driver ------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="conekit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="arrangement admissibility and invariants")
    p.add_argument("--input")
    p.add_argument("--inline")
    common(p)

    p = sub.add_parser("valuation", help="curve-germ tangent-cone densities")
    p.add_argument("--kind", required=True,
                   choices=["irreducible", "ordinary", "tangent-pair", "ak"])
    p.add_argument("--d", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--beta")
    p.add_argument("--beta1")
    p.add_argument("--beta2")
    p.add_argument("--betas")
    p.add_argument("--sweep", type=int, default=0)
    common(p)

    p = sub.add_parser("cp1", help="flat conical metrics on the line")
    p.add_argument("--input")
    p.add_argument("--inline")
    p.add_argument("--op", required=True, choices=["regime", "area", "period", "polygon"])
    p.add_argument("--from", dest="from_index", type=int)
    p.add_argument("--to", dest="to_index", type=int)
    common(p)

    p = sub.add_parser("cone", help="model-cone linear theory")
    p.add_argument("--op", required=True,
                   choices=["indicial", "mode", "radial", "exponents", "scaling"])
    p.add_argument("--lam")
    p.add_argument("--beta")
    p.add_argument("--k", type=int)
    p.add_argument("--s")
    p.add_argument("--r0", type=float, default=0.5)
    p.add_argument("--r1", type=float, default=2.0)
    p.add_argument("--u0", type=float, default=0.0)
    p.add_argument("--u1", type=float, default=0.0)
    p.add_argument("--source-const", dest="source_const")
    p.add_argument("--samples", type=int, default=513)
    p.add_argument("--j-max", dest="j_max", type=int, default=4)
    p.add_argument("--k-max", dest="k_max", type=int, default=4)
    p.add_argument("--power", default="2")
    p.add_argument("--lambda-scale", dest="lambda_scale", default="2")
    common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is not None and args.tol <= 0:
        print("tol must be positive", file=sys.stderr)
        return 1
    handlers = {
        "analyze": cmd_analyze,
        "valuation": cmd_valuation,
        "cp1": cmd_cp1,
        "cone": cmd_cone,
    }
    try:
        doc, code = handlers[args.subcommand](args)
    except INPUT_ERRORS as exc:
        print(_emit_json({"error": {"class": type(exc).__name__, "message": str(exc)}}),
              end="")
        return 1
    except ADMISSIBILITY_ERRORS as exc:
        print(_emit_json({"error": {"class": type(exc).__name__, "message": str(exc)}}),
              end="")
        return 2
    except NUMERIC_ERRORS as exc:
        payload = {"class": type(exc).__name__, "message": str(exc)}
        achieved = getattr(exc, "achieved", None)
        if achieved is not None:
            payload["achieved"] = achieved
        print(_emit_json({"error": payload}), end="")
        return 3
    except ConekitError as exc:  # any straggler maps to input error
        print(_emit_json({"error": {"class": type(exc).__name__, "message": str(exc)}}),
              end="")
        return 1

    if isinstance(doc, str):  # already CSV (valuation --sweep)
        sys.stdout.write(doc)
        return code
    if args.format == "csv":
        if args.subcommand == "analyze":
            sys.stdout.write(_analyze_csv(doc))
        elif args.subcommand == "cp1":
            sys.stdout.write(_cp1_csv(doc))
        elif args.subcommand == "cone":
            sys.stdout.write(_cone_csv(doc))
        else:
            sys.stdout.write(_emit_csv([{"key": k, "value": str(v)}
                                        for k, v in sorted(doc.items())],
                                       ["key", "value"]))
    else:
        sys.stdout.write(_emit_json(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
