"""Command line entry point.

Exit codes: 0 success / formula holds / compliant, 1 semantic negative
(formula fails, mitigation needed, selftest or simulation check failed),
2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import io
from .errors import CTLFError, FormulaSyntaxError
from .goldens import run_selftest
from .mitigation import Policy, plan_removals
from .model import WorldId
from .monitor import Status, ingest, q1_verdict, start
from .semantics import Distribution, as_fraction
from .simulator import SimConfig, completion_report

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=False) + "\n")
    else:
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v)
            out.write(f"{k:>14}  {v}\n")
        out.write("\n")


def _open_input(path: str):
    return sys.stdin if path == "-" else open(path)


def _load_target(args, required=True) -> Optional[Distribution]:
    if args.target is None:
        if required:
            raise UsageError("--target is required")
        return None
    return io.distribution_from_json(io.load_json(args.target))


def cmd_check(args, out) -> int:
    if args.query:
        query = io.load_json(args.query)
        model = io.model_from_json(query.get("model") or io.load_json(args.model))
    else:
        if args.model is None or args.formula is None:
            raise UsageError("check needs --model and --formula (or --query)")
        model = io.model_from_json(io.load_json(args.model))
        query = {"formula": args.formula}
        if args.world:
            query["world"] = args.world
        if args.path:
            query["path"] = args.path
    sigma = _load_target(args, required=False)
    result = io.run_query(model, sigma, query)
    _emit(result, args.format, out)
    return OK if result["holds"] else NEGATIVE


def _session(args):
    cfg = io.load_json(args.config) if args.config else {}
    model_obj = cfg.get("model") or (io.load_json(args.model) if args.model else None)
    target_obj = cfg.get("target") or (io.load_json(args.target) if args.target else None)
    if model_obj is None or target_obj is None:
        raise UsageError("monitor needs a model and a target (via --config or --model/--target)")
    spec = io.model_from_json(model_obj)
    target = io.distribution_from_json(target_obj)
    eps = as_fraction(args.epsilon if args.epsilon is not None else cfg.get("epsilon", "0"))
    dataset_obj = cfg.get("dataset") or (io.load_json(args.dataset) if args.dataset else None)
    dataset = io.counts_from_json(dataset_obj) if dataset_obj else None
    return start(spec, target, eps, dataset)


def cmd_monitor(args, out) -> int:
    state = _session(args)
    with _open_input(args.input) as fh:
        for outcome in io.read_trace(fh):
            state = ingest(state, outcome)
            _emit(io.verdict_to_json(state), args.format, out)
            out.flush()
    if state.steps == 0:
        _emit({"certificate": "vacuous"}, args.format, out)
        return OK
    verdict = q1_verdict(state)
    if verdict.status == Status.COMPLIANT:
        _emit({"certificate": "compliant", "observed": state.steps,
               "ratios": {p: io.rat(r) for p, r in verdict.ratios.items()}}, args.format, out)
        return OK
    plan = plan_removals(state.observed, state.target, Policy(args.policy))
    _emit({"plan": io.plan_to_json(plan)}, args.format, out)
    return NEGATIVE


def cmd_mitigate(args, out) -> int:
    target = _load_target(args)
    with _open_input(args.input) as fh:
        observed = list(io.read_trace(fh))
    plan = plan_removals(observed, target, Policy(args.policy))
    _emit(io.plan_to_json(plan), args.format, out)
    return OK


def cmd_simulate(args, out) -> int:
    if args.model is None:
        raise UsageError("simulate needs --model")
    spec = io.model_from_json(io.load_json(args.model))
    target = _load_target(args)
    if args.path:
        prefix = io.parse_path(args.path)
    elif args.world:
        from .model import root_path
        prefix = root_path(WorldId.parse(args.world), spec)
    else:
        raise UsageError("simulate needs --world or --path")
    cfg = SimConfig(spec, trials=args.trials, seed=args.seed)
    report = io.report_to_json(completion_report(prefix, target, cfg))
    _emit(report, args.format, out)
    return OK if report["pass"] else NEGATIVE


def cmd_selftest(args, out) -> int:
    results = run_selftest(sweep=not args.no_sweep)
    rows = [("case-id", "ref", "expected", "got", "pass")]
    rows += [(r.case_id, r.ref, r.expected, r.got, "ok" if r.passed else "FAIL") for r in results]
    if args.format == "json":
        for r in results:
            out.write(json.dumps({"case": r.case_id, "ref": r.ref, "expected": r.expected,
                                  "got": r.got, "pass": r.passed}) + "\n")
    else:
        widths = [max(len(row[k]) for row in rows) for k in range(5)]
        for row in rows:
            out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
    failed = [r.case_id for r in results if not r.passed]
    if failed:
        out.write(f"FAILED: {', '.join(failed)}\n")
        return NEGATIVE
    out.write(f"{len(results)} cases passed\n")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctlf", description="CTLF model checker and fairness monitor")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "table"), default="json")
        return p

    p = common(sub.add_parser("check", help="evaluate one formula"))
    p.add_argument("--model")
    p.add_argument("--target")
    p.add_argument("--formula")
    p.add_argument("--world", help="world as i.j")
    p.add_argument("--path", help="comma separated worlds a.b,c.d,...")
    p.add_argument("--query", help="query JSON file")
    p.set_defaults(func=cmd_check)

    p = common(sub.add_parser("monitor", help="stream verdicts over a JSON-lines trace"))
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--config")
    p.add_argument("--model")
    p.add_argument("--target")
    p.add_argument("--epsilon")
    p.add_argument("--dataset")
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.KEEP_EARLIEST.value)
    p.set_defaults(func=cmd_monitor)

    p = common(sub.add_parser("mitigate", help="plan removals for a trace"))
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--target")
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.KEEP_EARLIEST.value)
    p.set_defaults(func=cmd_mitigate)

    p = common(sub.add_parser("simulate", help="Monte Carlo check of a completion probability"))
    p.add_argument("--model")
    p.add_argument("--target")
    p.add_argument("--world")
    p.add_argument("--path")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("selftest", help="run the reference cases"))
    p.set_defaults(format="table")
    p.add_argument("--no-sweep", action="store_true", help="skip the closed-form vs enumeration sweep")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else OK
    try:
        return args.func(args, out)
    except FormulaSyntaxError as e:
        sys.stderr.write(f"ctlf: syntax error {e}\n")
        if e.text:
            sys.stderr.write(f"  {e.text}\n  {' ' * e.position}^\n")
        return ERROR
    except (CTLFError, UsageError, ValueError, KeyError, TypeError, OSError) as e:
        sys.stderr.write(f"ctlf: {type(e).__name__}: {e}\n")
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
