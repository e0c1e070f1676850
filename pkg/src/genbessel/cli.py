"""Command-line front end.

Subcommands: eval, check, verify, scan, admissible.  Records are printed as
``key: value`` lines on stdout, diagnostics go to stderr.

Exit codes: 0 success, 2 invalid arguments or grid, 3 evaluation failure,
4 scan found a ProvenButRefuted cell (condition holds but membership refuted).

Janowski special cases: P[1-2b, -1] is Re p > b, so S*[1-2b, -1] is
starlike of order b; S*[1-b, 0] is |zf'/f - 1| < 1-b; S*[b, -b] is
|zf'/f - 1| < b |zf'/f + 1|.  By the derivative theorem, (-4 kappa/c)(u - 1)
is close-to-convex whenever (-4 kappa/c) u' has positive real part.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import conditions as cond
from . import series
from .config import KNOWN_KEYS, ConfigError, ScanGrid, build_grid, load_config
from .errors import GenBesselError, InvalidParams
from .janowski import JanowskiPair
from .membership import Functional, MembershipVerdict, Status, verify
from .series import BesselParams

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_ANOMALY = 0, 2, 3, 4

CSV_HEADER = ["kappa_re", "kappa_im", "c_mod", "A", "B", "theorem", "mode", "condition_holds",
              "case_id", "min_slack", "verify_status", "worst_margin", "witness_re", "witness_im"]

THEOREM_FUNCTIONAL = {
    cond.Theorem.T21: Functional.U,
    cond.Theorem.T22: Functional.DERIV_NORM,
    cond.Theorem.T31: Functional.CONVEXITY,
    cond.Theorem.T32: Functional.STARLIKE_ZU,
    cond.Theorem.COR: Functional.CONVEXITY,
}

SCAN_GRID, SCAN_TOL = 1024, 1e-6


class Classification(enum.Enum):
    PROVEN_AND_VERIFIED = "ProvenAndVerified"
    PROVEN_BUT_REFUTED = "ProvenButRefuted"
    UNPROVEN_BUT_VERIFIED = "UnprovenButVerified"
    UNPROVEN_AND_REFUTED = "UnprovenAndRefuted"
    INCONCLUSIVE = "Inconclusive"


def classify(condition_holds: bool, status: Status) -> Classification:
    if status is Status.INCONCLUSIVE:
        return Classification.INCONCLUSIVE
    if condition_holds:
        return (Classification.PROVEN_AND_VERIFIED if status is Status.MEMBER
                else Classification.PROVEN_BUT_REFUTED)
    return (Classification.UNPROVEN_BUT_VERIFIED if status is Status.MEMBER
            else Classification.UNPROVEN_AND_REFUTED)


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits; complex as re+imj."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, (float, np.floating)):
        return f"{x:.17g}"
    if isinstance(x, enum.Enum):
        return str(x.value)
    return str(x)


def emit(out, pairs):
    for k, v in pairs:
        print(f"{k}: {fmt(v)}", file=out)


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--mode", choices=["proof", "stated"], default=default(None),
                        help="t21 large-A upper bound: proof-derived (4(1-A)) or as stated (2(1-A))")
    parser.add_argument("--tol", type=float, default=default(None), help="certification tolerance")
    parser.add_argument("--out", default=default(None), help="output path (scan CSV)")
    parser.add_argument("--config", default=default(None), help="scan configuration file")
    parser.add_argument("--precise", action="store_true", default=default(False),
                        help="full boundary budget during scans")


def _params_flags(p):
    p.add_argument("--kappa", type=parse_complex, help="kappa = lambda + (b+1)/2")
    p.add_argument("--lam", type=parse_complex, help="order lambda (with --b)")
    p.add_argument("--b", type=parse_complex, help="parameter b (with --lam)")
    p.add_argument("--c", type=parse_complex, required=True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    parser = argparse.ArgumentParser(
        prog="genbessel",
        description="Generalized Bessel functions and Janowski-class conditions.",
        epilog="Classes: P[1-2b,-1] is Re p > b; S*[1-b,0] and S*[b,-b] are the usual "
               "starlike subclasses obtained by choosing (A, B).")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate u, u' or u'' at a point")
    _params_flags(p)
    p.add_argument("--z", type=parse_complex, required=True)
    p.add_argument("--order", type=int, choices=[0, 1, 2], default=0)

    p = sub.add_parser("check", parents=[common], help="evaluate a theorem's sufficient condition")
    p.add_argument("--theorem", choices=[t.value for t in cond.Theorem], required=True)
    p.add_argument("--A", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--kappa", type=parse_complex, required=True)
    p.add_argument("--c", type=parse_complex, required=True)

    p = sub.add_parser("verify", parents=[common], help="certify or refute membership numerically")
    p.add_argument("--functional", choices=[f.value for f in Functional], required=True)
    _params_flags(p)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--grid", type=int, default=4096)

    p = sub.add_parser("scan", parents=[common], help="classify a parameter grid, write CSV")
    for axis in ("kappa-re", "kappa-im", "c-mod"):
        p.add_argument(f"--{axis}", nargs=3, metavar=("MIN", "MAX", "STEPS"))
    p.add_argument("--A", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--theorem", choices=[t.value for t in cond.Theorem])
    p.add_argument("--gamma", type=float)
    p.add_argument("--c-arg", type=float, help="arg c used for verification (default 0)")
    p.add_argument("--verify", action="store_true", help="also run membership verification")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("admissible", parents=[common], help="sample an admissibility profile G, H or Q")
    p.add_argument("--fn", choices=["G", "H", "Q"], required=True)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, default=-1.0)
    p.add_argument("--c", type=parse_complex, required=True)
    p.add_argument("--kappa", type=parse_complex, required=True)
    p.add_argument("--rho-min", type=float, default=-5.0)
    p.add_argument("--rho-max", type=float, default=5.0)
    p.add_argument("--rho-steps", type=int, default=11)
    return parser


def _params_from(args) -> BesselParams:
    if args.kappa is not None:
        if args.lam is not None or args.b is not None:
            raise UsageError("give either --kappa or --lam/--b, not both")
        return BesselParams.from_kappa(args.kappa, args.c)
    if args.lam is None or args.b is None:
        raise UsageError("need --kappa, or both --lam and --b")
    return BesselParams(args.lam, args.b, args.c)


def _pair_from(args) -> JanowskiPair:
    if args.A is None or args.B is None:
        raise UsageError("--A and --B are required")
    try:
        return JanowskiPair(args.A, args.B)
    except InvalidParams as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args, out) -> int:
    try:
        params = _params_from(args)
        val = series.eval(params, args.z, args.order)
    except GenBesselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    emit(out, [("kappa", params.kappa), ("c", params.c), ("z", args.z), ("order", args.order),
               ("value", val.value), ("tail_bound", val.tail_bound), ("terms_used", val.terms_used)])
    return EXIT_OK


def cmd_check(args, out) -> int:
    theorem = cond.Theorem(args.theorem)
    if theorem is cond.Theorem.COR:
        if args.gamma is None:
            raise UsageError("--gamma is required for the corollary")
        if not 0.0 <= args.gamma < 1.0:
            raise UsageError("gamma must lie in [0, 1)")
        report = cond.corollary_condition(args.gamma, args.kappa, args.c)
    else:
        if args.gamma is not None:
            raise UsageError("--gamma only applies to the corollary")
        pair = _pair_from(args)
        if series.pole_distance(args.kappa) <= series.POLE_GUARD:
            raise UsageError("kappa at nonpositive integer")
        report = cond.check(theorem, pair, args.kappa, args.c, cond.Mode(args.mode or "proof"))
    emit(out, [("theorem", report.theorem), ("case_id", report.case_id), ("holds", report.holds),
               ("mode", report.mode)])
    emit(out, [(f"slack.{s.name}", s.value) for s in report.slacks])
    return EXIT_OK


def _emit_verdict(out, v: MembershipVerdict):
    emit(out, [("status", v.status), ("worst_margin", v.worst_margin), ("witness", v.witness),
               ("samples_used", v.samples_used), ("side_conditions_ok", v.side_conditions_ok),
               ("lower_bound", v.lower_bound), ("diagnostic", v.diagnostic)])


def cmd_verify(args, out) -> int:
    pair = _pair_from(args)
    try:
        params = _params_from(args)
    except GenBesselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    tol = args.tol if args.tol is not None else 1e-8
    v = verify(Functional(args.functional), params, pair, tol=tol, grid=args.grid)
    _emit_verdict(out, v)
    if v.status is Status.INCONCLUSIVE and v.diagnostic and not math.isfinite(v.worst_margin):
        print(f"error: {v.diagnostic}", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


@dataclass(frozen=True)
class CellResult:
    kappa: complex
    c_mod: float
    report: cond.ConditionReport
    verdict: MembershipVerdict | None
    classification: Classification | None


def _evaluate_cell(task):
    grid, kappa, c_mod, do_verify, precise = task
    report = cond.check(grid.theorem, grid.pair, kappa, c_mod, grid.mode, grid.gamma)
    if not do_verify:
        return CellResult(kappa, c_mod, report, None, None)
    functional = THEOREM_FUNCTIONAL[grid.theorem]
    c = c_mod * complex(math.cos(grid.c_arg), math.sin(grid.c_arg)) if grid.c_arg else complex(c_mod)

    def run(full):
        try:
            params = BesselParams.from_kappa(kappa, c)
        except InvalidParams as exc:
            return MembershipVerdict(Status.INCONCLUSIVE, math.nan, complex(math.nan, math.nan), 0,
                                     False, math.nan, str(exc))
        if full:
            return verify(functional, params, grid.pair, tol=grid.tol)
        return verify(functional, params, grid.pair, tol=max(grid.tol, SCAN_TOL), grid=SCAN_GRID)

    verdict = run(precise)
    cls = classify(report.holds, verdict.status)
    if cls is Classification.PROVEN_BUT_REFUTED and not precise:
        verdict = run(True)
        cls = classify(report.holds, verdict.status)
    return CellResult(kappa, c_mod, report, verdict, cls)


def _csv_row(grid: ScanGrid, r: CellResult):
    v = r.verdict
    row = [fmt(r.kappa.real), fmt(r.kappa.imag), fmt(r.c_mod), fmt(grid.pair.A), fmt(grid.pair.B),
           grid.theorem.value, grid.mode.value, fmt(r.report.holds), r.report.case_id.value,
           fmt(r.report.min_slack)]
    if v is None:
        row += ["skipped", "", "", ""]
    else:
        row += [v.status.value, fmt(float(v.worst_margin)), fmt(float(v.witness.real)),
                fmt(float(v.witness.imag))]
    return row


def _scan_values(args):
    values = {}
    if args.config:
        values.update(load_config(args.config))
    for axis in ("kappa_re", "kappa_im", "c_mod"):
        triple = getattr(args, axis)
        if triple is not None:
            values[f"{axis}.min"], values[f"{axis}.max"], values[f"{axis}.steps"] = triple
    for key, attr in (("pair.A", "A"), ("pair.B", "B"), ("theorem", "theorem"), ("gamma", "gamma"),
                      ("c_arg", "c_arg"), ("tol", "tol")):
        if getattr(args, attr) is not None:
            values[key] = getattr(args, attr)
    if args.mode is not None:
        values["mode"] = args.mode
    assert set(values) <= set(KNOWN_KEYS)
    return values


def cmd_scan(args, out) -> int:
    try:
        grid = build_grid(_scan_values(args))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.out:
        raise UsageError("scan requires --out")

    tasks = [(grid, kappa, cm, args.verify, args.precise) for kappa, cm in grid.cells()]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_evaluate_cell, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        results = [_evaluate_cell(t) for t in tasks]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in results:
        writer.writerow(_csv_row(grid, r))
    with open(args.out, "w", newline="") as fh:
        fh.write(buf.getvalue())

    holds = sum(r.report.holds for r in results)
    summary = [("cells", len(results)), ("condition_holds", holds),
               ("condition_fails", len(results) - holds)]
    anomalies = 0
    if args.verify:
        counts = {c: 0 for c in Classification}
        for r in results:
            counts[r.classification] += 1
        summary += [(c.value, n) for c, n in counts.items()]
        anomalies = counts[Classification.PROVEN_BUT_REFUTED]
        summary.append(("anomalies", anomalies))
    summary.append(("out", args.out))
    emit(out, summary)
    return EXIT_ANOMALY if anomalies else EXIT_OK


def cmd_admissible(args, out) -> int:
    if args.rho_steps < 1 or args.rho_min > args.rho_max:
        raise UsageError("invalid rho range")
    rhos = np.linspace(args.rho_min, args.rho_max, args.rho_steps)
    if args.fn in ("G", "H"):
        if args.B != -1.0:
            raise UsageError(f"{args.fn} is defined for B = -1 only")
        _pair_from(args)
        if args.fn == "G":
            if args.kappa.real - 1.0 <= 0:
                raise UsageError("G requires Re(kappa - 1) > 0")
            vals = cond.eval_G(rhos, args.A, args.c, args.kappa)
            sup, arg = cond.sup_G(args.A, args.c, args.kappa)
        else:
            vals = cond.eval_H(rhos, args.A, args.c, args.kappa)
            sup, arg = cond.sup_H(args.A, args.c, args.kappa)
    else:
        pair = _pair_from(args)
        if pair.B == -1.0:
            raise UsageError("Q is defined for B > -1 only")
        coeffs = cond.q_coefficients(pair, args.kappa, args.c)
        vals = cond.eval_Q(coeffs, rhos)
        sup, arg = cond.sup_Q(coeffs)
        emit(out, [("P", coeffs.P), ("R", coeffs.R), ("S", coeffs.S)])
    print("rho,value", file=out)
    for r, v in zip(rhos, np.atleast_1d(vals)):
        print(f"{fmt(float(r))},{fmt(float(v))}", file=out)
    emit(out, [("sup", float(sup)), ("argmax", float(arg))])
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "verify": cmd_verify, "scan": cmd_scan,
            "admissible": cmd_admissible}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
