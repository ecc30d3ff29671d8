"""Command line front door.

Subcommands: ``aggregate`` runs a mechanism on a profile file, ``apportion``
rounds a fractional allocation, ``check`` tests an axiom on a profile and
allocation, ``search`` runs an exhaustive property search, ``encode-sat``
writes a DIMACS instance (optionally solving it with an external command),
and ``repro`` replays the pinned regression cases, optionally writing a TSV
report with figures.

Exit codes: 0 success, 1 data error, 2 usage error, 3 axiom violated,
4 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import axioms, satgen
from .apportion import (
    FRACTIONAL_MECHANISMS,
    TIE_BREAKS,
    composed_by_name,
    method_by_name,
)
from .cases import REPRO_CASES
from .core import (
    IntegralProfile,
    allocation_to_json,
    parse_allocation,
    parse_profile,
)
from .errors import BudgetAggError, BudgetExceededError, InvalidInputError
from .schedules import ceil_im, ceil_util, floor_im, floor_util

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_VIOLATED = 3
EXIT_BUDGET = 4

INTEGRAL_MECHANISMS = {
    "floor-im": floor_im,
    "floor-util": floor_util,
    "ceil-im": ceil_im,
    "ceil-util": ceil_util,
}


def _load_profile(path: str):
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read profile: {exc}") from None
    return parse_profile(data)


def _resolve_mechanism(name: str, parser: argparse.ArgumentParser):
    if name in INTEGRAL_MECHANISMS:
        return INTEGRAL_MECHANISMS[name], True
    if name in FRACTIONAL_MECHANISMS:
        return FRACTIONAL_MECHANISMS[name], False
    if name.startswith("compose:"):
        try:
            return composed_by_name(name), True
        except InvalidInputError as exc:
            parser.error(str(exc))
    parser.error(f"unknown mechanism {name!r}")


def _cmd_aggregate(args, parser) -> int:
    mechanism, _ = _resolve_mechanism(args.mechanism, parser)
    profile = _load_profile(args.profile)
    if args.mechanism in INTEGRAL_MECHANISMS and not isinstance(profile, IntegralProfile):
        raise InvalidInputError(
            f"mechanism {args.mechanism} needs an integral profile"
        )
    allocation = mechanism(profile)
    print(json.dumps(allocation_to_json(allocation)))
    return EXIT_OK


def _cmd_apportion(args, parser) -> int:
    try:
        method = method_by_name(args.method)
    except InvalidInputError as exc:
        parser.error(str(exc))
    allocation = parse_allocation(json.loads(args.input))
    outcome = method(allocation)
    result = {"outcomes": [allocation_to_json(a) for a in outcome]}
    if args.tie_break:
        if args.tie_break not in TIE_BREAKS:
            parser.error(f"unknown tie-break {args.tie_break!r}")
        picked = TIE_BREAKS[args.tie_break]().select(outcome, reference=allocation)
        result["selected"] = allocation_to_json(picked)
    print(json.dumps(result))
    return EXIT_OK


def _cmd_check(args, parser) -> int:
    profile = _load_profile(args.profile)
    if not isinstance(profile, IntegralProfile):
        raise InvalidInputError("axiom checks need an integral profile")
    allocation = parse_allocation(json.loads(args.allocation))
    verdict: dict = {"axiom": args.axiom}
    if args.axiom == "jr":
        violation = axioms.check_jr(profile, allocation)
        verdict["satisfied"] = violation is None
        if violation is not None:
            verdict["witness"] = {
                "alternative": violation.alternative + 1,
                "voters": sorted(v + 1 for v in violation.voters),
            }
    elif args.axiom == "ejr-plus":
        violation = axioms.check_ejr_plus(profile, allocation)
        verdict["satisfied"] = violation is None
        if violation is not None:
            verdict["witness"] = {
                "alternative": violation.alternative + 1,
                "level": violation.level,
                "voters": sorted(v + 1 for v in violation.voters),
            }
    elif args.axiom == "range-respect":
        bad = axioms.check_range_respect(profile, allocation)
        verdict["satisfied"] = bad is None
        if bad is not None:
            verdict["witness"] = {"alternative": bad + 1}
    else:  # sm-quota
        res = axioms.check_sm_quota_prop(profile, allocation)
        verdict["satisfied"] = res.ok
        verdict["vacuous"] = res.vacuous
        if not res.ok:
            verdict["witness"] = {"alternative": res.alternative + 1}
    print(json.dumps(verdict))
    return EXIT_OK if verdict["satisfied"] else EXIT_VIOLATED


def _cmd_search(args, parser) -> int:
    mechanism, _ = _resolve_mechanism(args.mechanism, parser)
    n, m, b = args.n, args.m, args.b
    result: dict = {"property": args.property, "mechanism": args.mechanism,
                    "n": n, "m": m, "b": b}
    if args.property == "manipulation":
        witness = axioms.find_manipulation(mechanism, n, m, b,
                                           max_evals=args.max_evals)
        result["witness"] = None if witness is None else {
            "profile": [allocation_to_json(v) for v in witness.profile.votes],
            "voter": witness.voter + 1,
            "misreport": allocation_to_json(witness.misreport),
            "honest_output": allocation_to_json(witness.honest_output),
            "deviant_output": allocation_to_json(witness.deviant_output),
            "gain": str(witness.gain),
        }
    elif args.property == "dictator":
        voter = axioms.find_dictator(mechanism, n, m, b)
        result["witness"] = None if voter is None else {"voter": voter + 1}
    else:  # onto
        missing = axioms.check_onto(mechanism, n, m, b)
        result["witness"] = None if missing is None else {
            "missing": allocation_to_json(missing)
        }
    print(json.dumps(result))
    return EXIT_OK


def _cmd_encode_sat(args, parser) -> int:
    axiom_set = frozenset(x.strip() for x in args.axioms.split(",") if x.strip())
    try:
        cnf, varmap = satgen.encode(args.n, args.m, args.b, axiom_set)
    except InvalidInputError as exc:
        parser.error(str(exc))
    payload = satgen.emit_dimacs(cnf, varmap, comments=args.comments)
    out = Path(args.out)
    out.write_bytes(payload)
    info = {
        "out": str(out),
        "vars": cnf.num_vars,
        "clauses": len(cnf.clauses),
        "families": {
            "at_least_one": cnf.stats.at_least_one,
            "at_most_one": cnf.stats.at_most_one,
            "truthfulness": cnf.stats.truthfulness,
            "empty_at_least_one": cnf.stats.empty_at_least_one,
        },
    }
    if args.solve:
        if not args.solver_cmd:
            parser.error("--solve needs --solver-cmd")
        result = satgen.run_solver(args.solver_cmd, out)
        info["status"] = result.status
        if result.status == "SAT":
            table = satgen.decode_model(result.model, varmap)
            report = satgen.verify_table(table)
            info["table_size"] = len(table)
            info["verified"] = report.ok
    print(json.dumps(info))
    return EXIT_OK


def _cmd_repro(args, parser) -> int:
    if args.case == "all":
        names = list(REPRO_CASES)
    elif args.case in REPRO_CASES:
        names = [args.case]
    else:
        parser.error(f"unknown case {args.case!r}")
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    all_passed = True
    for name in names:
        result = REPRO_CASES[name]()
        all_passed &= result.passed
        status = "PASS" if result.passed else "FAIL"
        figure_path = ""
        if out_dir is not None and result.figure is not None:
            figure_path = str(out_dir / f"{name}.png")
            result.figure(figure_path)
        rows.append((name, status, result.expected, result.actual, figure_path))
        print(f"{name}: {status}")
        print(f"  expected: {result.expected}")
        print(f"  actual:   {result.actual}")
    if out_dir is not None:
        report = out_dir / "report.tsv"
        with open(report, "w") as fh:
            fh.write("case\tstatus\texpected\tactual\tfigure\n")
            for row in rows:
                fh.write("\t".join(row) + "\n")
        print(f"report written to {report}")
    return EXIT_OK if all_passed else EXIT_DATA


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgetagg",
        description="Discrete budget aggregation mechanisms and checkers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="run a mechanism on a profile")
    p.add_argument("--mechanism", required=True,
                   help="floor-im | floor-util | ceil-im | ceil-util | im | "
                        "utilitarian | compose:<mech>+<method>+<tiebreak>")
    p.add_argument("--profile", required=True, help="profile JSON file, or -")

    p = sub.add_parser("apportion", help="round a fractional allocation")
    p.add_argument("--method", required=True,
                   help="hamilton | quota | divisor=<delta>")
    p.add_argument("--input", required=True, help="allocation as JSON")
    p.add_argument("--tie-break", help="index | larger-input | lex")

    p = sub.add_parser("check", help="check an axiom for a profile/allocation")
    p.add_argument("--axiom", required=True,
                   choices=["jr", "ejr-plus", "range-respect", "sm-quota"])
    p.add_argument("--profile", required=True)
    p.add_argument("--allocation", required=True, help="allocation as JSON")

    p = sub.add_parser("search", help="exhaustive property search")
    p.add_argument("--property", required=True,
                   choices=["manipulation", "dictator", "onto"])
    p.add_argument("--mechanism", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--max-evals", type=int, default=10_000_000)

    p = sub.add_parser("encode-sat", help="emit a DIMACS impossibility instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--axioms", default="truthful,jr,anonymous")
    p.add_argument("--out", required=True)
    p.add_argument("--comments", action="store_true",
                   help="annotate variables with their profile and allocation")
    p.add_argument("--solve", action="store_true")
    p.add_argument("--solver-cmd",
                   help="external solver command; gets the CNF path appended")

    p = sub.add_parser("repro", help="replay pinned regression cases")
    p.add_argument("--case", default="all",
                   help="all | " + " | ".join(REPRO_CASES))
    p.add_argument("--out-dir", help="write report.tsv and figures here")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "aggregate": _cmd_aggregate,
        "apportion": _cmd_apportion,
        "check": _cmd_check,
        "search": _cmd_search,
        "encode-sat": _cmd_encode_sat,
        "repro": _cmd_repro,
    }
    try:
        return handlers[args.command](args, parser)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BudgetAggError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
