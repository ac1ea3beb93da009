"""``ivbounds`` command line.

Exit codes: 0 ok / compatible, 2 bad input or parameters, 3 law falsified,
4 oracle size cap exceeded, 5 oracle and enumeration disagree.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import bench as bench_mod
from .errors import DimensionTooLarge, InfeasibleLaw, IVBoundsError
from .expr import LinearExpr, inequality_text
from .io import dump_document, from_law, load_document, to_law
from .model import OutcomeSupport, as_rational, corrupt, marginalize, random_full_data_law
from .multival import (
    count_multival_inequalities,
    count_multival_vertices,
    enumerate_multival_inequalities,
    enumerate_multival_vertices,
    multival_lower_bound,
    multival_test,
    multival_upper_bound,
)
from .oracle import oracle_ate_bounds, oracle_feasible
from .rays import count_inequalities, falsification_test, sharp_inequalities
from .signatures import count_signatures, enumerate_signatures
from .vertices import ate_bounds, emit_bound_expressions

EXIT_OK, EXIT_INPUT, EXIT_FALSIFIED, EXIT_CAP, EXIT_MISMATCH = 0, 2, 3, 4, 5
NON_SHARP = "valid but not sharp: multi-valued instrument families are partial"

log = logging.getLogger("ivbounds")


class UsageError(Exception):
    pass


def _num(x, as_float: bool) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if as_float:
        return repr(float(x))
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def _emit(args, doc: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _violation_records(report, as_float: bool) -> list[dict]:
    return [
        {
            "family": ineq.family,
            "T": list(ineq.T),
            "expr": ineq.text(reduced=True),
            "raw": inequality_text(ineq.expr),
            "slack": _num(slack, as_float),
        }
        for ineq, slack in report.violations
    ]


def _axiom_records(report, as_float: bool) -> list[dict]:
    return [
        {"family": a.family, "detail": a.detail, "value": _num(a.value, as_float)}
        for a in report.axiom_failures
    ]


def _report_text(report, as_float: bool) -> str:
    lines = [f"verdict: {report.verdict}" + ("" if report.complete else " (necessary conditions only)")]
    for ineq, slack in report.violations:
        lines.append(f"  violated [{ineq.family}] {ineq.text(reduced=True)}  slack {_num(slack, as_float)}")
    for a in report.axiom_failures:
        lines.append(f"  axiom {a.family}: {a.detail}")
    return "\n".join(lines)


def _falsification(law):
    return falsification_test(law) if law.ell == 2 else multival_test(law)


# -- subcommands -----------------------------------------------------------

def cmd_bounds(args) -> int:
    law = to_law(load_document(args.input))
    report = _falsification(law)
    fl = args.float
    if report.falsified:
        doc = {
            "verdict": report.verdict,
            "bounds": None,
            "violations": _violation_records(report, fl),
            "axiom_failures": _axiom_records(report, fl),
        }
        _emit(args, doc, "bounds undefined: the law is incompatible with the IV model\n"
              + _report_text(report, fl))
        return EXIT_FALSIFIED
    if law.ell == 2:
        res = ate_bounds(law, workers=args.threads)
        lw = sorted(str(s) for s in res.lower_witnesses)
        uw = sorted(str(s) for s in res.upper_witnesses)
        doc = {
            "verdict": report.verdict,
            "sharp": True,
            "bounds": {"lower": _num(res.lower, fl), "upper": _num(res.upper, fl)},
            "witnesses": {"lower": lw, "upper": uw},
            "violations": [],
        }
        text = (
            f"lower: {_num(res.lower, fl)}\nupper: {_num(res.upper, fl)}\n"
            f"lower witnesses: {', '.join(lw)}\nupper witnesses: {', '.join(uw)}"
        )
    else:
        lo, hi = multival_lower_bound(law), multival_upper_bound(law)
        doc = {
            "verdict": report.verdict,
            "sharp": False,
            "note": NON_SHARP,
            "bounds": {"lower": _num(lo, fl), "upper": _num(hi, fl)},
            "witnesses": None,
            "violations": [],
        }
        text = f"lower: {_num(lo, fl)}\nupper: {_num(hi, fl)}\nnote: {NON_SHARP}"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_test(args) -> int:
    law = to_law(load_document(args.input))
    report = _falsification(law)
    fl = args.float
    doc = {
        "verdict": report.verdict,
        "complete": report.complete,
        "violations": _violation_records(report, fl),
        "axiom_failures": _axiom_records(report, fl),
    }
    _emit(args, doc, _report_text(report, fl))
    return EXIT_FALSIFIED if report.falsified else EXIT_OK


def _parse_gammas(args) -> OutcomeSupport:
    if args.gammas:
        vals = [as_rational(g) for g in args.gammas.split(",")]
        if args.n is not None and len(vals) != args.n:
            raise UsageError(f"--n {args.n} does not match {len(vals)} gammas")
        return OutcomeSupport(tuple(vals))
    if args.n is None:
        raise UsageError("give --n or --gammas")
    return OutcomeSupport.range(args.n)


def _latex_bounds(lower: list, upper: list) -> str:
    lo = ",\\\\\n  ".join(e.latex() for e in lower)
    hi = ",\\\\\n  ".join(e.latex() for e in upper)
    return (
        "\\max\\left\\{\\begin{array}{l}\n  " + lo + "\n\\end{array}\\right\\}\n"
        "\\le \\mathrm{ATE} \\le\n"
        "\\min\\left\\{\\begin{array}{l}\n  " + hi + "\n\\end{array}\\right\\}"
    )


def cmd_emit(args) -> int:
    support = _parse_gammas(args)
    n, ell = support.n, args.ell
    fmt = args.format
    if args.kind == "bounds":
        if ell == 2:
            lower = list(emit_bound_expressions(support, "lower"))
            upper = list(emit_bound_expressions(support, "upper"))
            sharp = True
        else:
            lower = [
                _expr_of(w) for w in enumerate_multival_vertices(support, ell)
            ]
            upper = [_conjugate_expr(e) for e in lower]
            sharp = False
        if fmt == "json":
            doc = {
                "n": n, "ell": ell, "sharp": sharp,
                "lower": [e.to_json() for e in lower],
                "upper": [e.to_json() for e in upper],
            }
            if not sharp:
                doc["note"] = NON_SHARP
            print(json.dumps(doc, indent=2))
        elif fmt == "latex":
            print(_latex_bounds(lower, upper))
        else:
            if not sharp:
                print(f"# {NON_SHARP}")
            print("lower bound = max of:")
            for e in lower:
                print(f"  {e.text()}")
            print("upper bound = min of:")
            for e in upper:
                print(f"  {e.text()}")
        return EXIT_OK

    ineqs = list(sharp_inequalities(n)) if ell == 2 else list(enumerate_multival_inequalities(n, ell))
    reduced = args.reduced
    if fmt == "json":
        doc = {
            "n": n, "ell": ell, "complete": ell == 2,
            "inequalities": [
                {
                    "family": i.family,
                    "T": list(i.T),
                    "expr": (i.expr.reduced() if reduced else i.expr).to_json(),
                    "text": i.text(reduced=reduced),
                }
                for i in ineqs
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        if ell != 2:
            print("# necessary conditions only" if fmt == "text" else "% necessary conditions only")
        for i in ineqs:
            print(i.text(reduced=reduced, latex=fmt == "latex"))
    return EXIT_OK


def _expr_of(w):
    return LinearExpr.from_vector(w.n, w.ell, w.values)


def _conjugate_expr(e):
    """Upper-bound term: negate and swap the treatment index."""
    return LinearExpr.from_mapping(
        e.n, e.ell, {(y, 1 - d, z): -c for (y, d, z), c in e.terms}, -e.constant
    )


def cmd_count(args) -> int:
    ell = args.ell
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        if ell == 2:
            row = {"n": n, "vertices": count_signatures(n), "inequalities": count_inequalities(n)}
        else:
            row = {
                "n": n,
                "vertices": count_multival_vertices(n, ell),
                "inequalities": count_multival_inequalities(n, ell),
            }
        if args.verify:
            support = OutcomeSupport.range(n)
            if ell == 2:
                row["enumerated_vertices"] = sum(1 for _ in enumerate_signatures(n))
                row["enumerated_inequalities"] = sum(1 for _ in sharp_inequalities(n))
            else:
                row["enumerated_vertices"] = sum(1 for _ in enumerate_multival_vertices(support, ell))
                row["enumerated_inequalities"] = sum(1 for _ in enumerate_multival_inequalities(n, ell))
        rows.append(row)
    keys = list(rows[0]) if rows else ["n"]
    text = "\t".join(keys) + "\n" + "\n".join("\t".join(str(r[k]) for k in keys) for r in rows)
    _emit(args, {"ell": ell, "rows": rows}, text)
    if args.verify and any(
        r["enumerated_vertices"] != r["vertices"] or r["enumerated_inequalities"] != r["inequalities"]
        for r in rows
    ):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_oracle(args) -> int:
    law = to_law(load_document(args.input))
    fl = args.float
    if args.mode == "feasible":
        feasible = oracle_feasible(law.probs, law.n, law.ell, law.support)
        doc = {"feasible": feasible}
        code = EXIT_OK
        if args.compare:
            report = _falsification(law)
            agree = (not report.falsified) == feasible if report.complete else (feasible or report.falsified)
            doc["enumeration_verdict"] = report.verdict
            doc["match"] = agree
            if not agree:
                code = EXIT_MISMATCH
        _emit(args, doc, "\n".join(f"{k}: {v}" for k, v in doc.items()))
        return code

    try:
        lo, hi = oracle_ate_bounds(law)
    except InfeasibleLaw:
        doc = {"verdict": "falsified", "bounds": None}
        if args.compare:
            report = _falsification(law)
            doc["match"] = report.falsified or not report.complete
            if not doc["match"]:
                _emit(args, doc, "oracle: infeasible law; enumeration disagrees")
                return EXIT_MISMATCH
        _emit(args, doc, "oracle: infeasible law (bounds undefined)")
        return EXIT_FALSIFIED
    doc = {"bounds": {"lower": _num(lo, fl), "upper": _num(hi, fl)}}
    code = EXIT_OK
    if args.compare:
        if law.ell == 2:
            res = ate_bounds(law, workers=args.threads)
            match = (res.lower, res.upper) == (lo, hi)
            doc["enumeration"] = {"lower": _num(res.lower, fl), "upper": _num(res.upper, fl)}
        else:
            # only validity can be compared for the partial families
            mlo, mhi = multival_lower_bound(law), multival_upper_bound(law)
            match = mlo <= lo and hi <= mhi
            doc["enumeration"] = {"lower": _num(mlo, fl), "upper": _num(mhi, fl)}
        doc["match"] = match
        if not match:
            code = EXIT_MISMATCH
    text = f"lower: {doc['bounds']['lower']}\nupper: {doc['bounds']['upper']}"
    if "match" in doc:
        text += f"\nmatch: {doc['match']}"
    _emit(args, doc, text)
    return code


def cmd_gen(args) -> int:
    if args.n < 2 or args.ell < 2:
        raise UsageError("need --n >= 2 and --ell >= 2")
    q = random_full_data_law(args.n, args.ell, args.seed)
    law = marginalize(q)
    out = Path(args.output)
    meta = {"seed": args.seed, "kind": "marginalized"}
    out.write_text(dump_document(from_law(law, meta)) + "\n", encoding="utf-8")
    written = [str(out)]
    if args.corrupt is not None:
        mag = as_rational(args.corrupt)
        bad = corrupt(law, mag, args.seed)
        cpath = Path(args.corrupt_output) if args.corrupt_output else out.with_name(out.stem + "-corrupt" + out.suffix)
        cmeta = {"seed": args.seed, "kind": "corrupted", "magnitude": str(mag)}
        cpath.write_text(dump_document(from_law(bad, cmeta)) + "\n", encoding="utf-8")
        written.append(str(cpath))
    _emit(args, {"written": written}, "\n".join(written))
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.n_max > 12:
        raise UsageError("--n-max is limited to 12")
    modes = bench_mod.MODES if args.mode == "both" else (args.mode,)
    records = bench_mod.run_bench(args.n_min, args.n_max, args.repetitions, modes)
    text = bench_mod.records_to_csv(records)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        log.info("wrote %s", args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags; the subcommand copy uses SUPPRESS so it never clobbers them."""
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=("text", "json", "latex"), default=dflt("text"),
                        help="output format (latex applies to emit)")
    parser.add_argument("--threads", type=int, default=dflt(1), help="worker processes for bound evaluation")
    num = parser.add_mutually_exclusive_group()
    num.add_argument("--exact", dest="float", action="store_false", default=dflt(False),
                     help="display exact rationals (default)")
    num.add_argument("--float", dest="float", action="store_true", default=dflt(False),
                     help="display floats; computation stays exact")
    parser.add_argument("--seed", type=int, default=dflt(0))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = argparse.ArgumentParser(prog="ivbounds",
                                description="Sharp ATE bounds and IV falsification for discrete IV models.")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bounds", parents=[common], help="ATE bounds for an input law")
    s.add_argument("input")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("test", parents=[common], help="falsification test for an input law")
    s.add_argument("input")
    s.set_defaults(func=cmd_test)

    s = sub.add_parser("emit", parents=[common], help="symbolic bound terms or inequalities")
    s.add_argument("kind", choices=("bounds", "inequalities"))
    s.add_argument("--n", type=int)
    s.add_argument("--gammas", help="comma-separated outcome support, e.g. 0,1/2,1")
    s.add_argument("--ell", type=int, default=2)
    s.add_argument("--reduced", action="store_true", help="use per-arm normalization to shorten inequalities")
    s.set_defaults(func=cmd_emit)

    s = sub.add_parser("count", parents=[common], help="closed-form term counts")
    s.add_argument("--n-min", type=int, default=2)
    s.add_argument("--n-max", type=int, default=9)
    s.add_argument("--ell", type=int, default=2)
    s.add_argument("--verify", action="store_true", help="also enumerate and compare")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("oracle", parents=[common], help="exact LP answers")
    s.add_argument("mode", choices=("bounds", "feasible"))
    s.add_argument("input")
    s.add_argument("--compare", action="store_true", help="check against the enumeration path")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen", parents=[common], help="write a random feasible fixture")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--ell", type=int, default=2)
    s.add_argument("--output", required=True)
    s.add_argument("--corrupt", help="also write a corrupted copy with this magnitude, e.g. 0.4")
    s.add_argument("--corrupt-output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", parents=[common], help="time enumeration against output size")
    s.add_argument("--n-min", type=int, default=2)
    s.add_argument("--n-max", type=int, default=9)
    s.add_argument("--repetitions", type=int, default=1)
    s.add_argument("--mode", choices=("both",) + bench_mod.MODES, default="both")
    s.add_argument("--output", help="CSV path (stdout if omitted)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except DimensionTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (IVBoundsError, UsageError, ValueError, TypeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT

if __name__ == "__main__":
    sys.exit(main())
