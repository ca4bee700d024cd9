"""Command line front end.

    cyclosched optimize -i tasks.json [--oracle | --check]
    cyclosched table    -i tasks.json
    cyclosched schedule -i tasks.json [--base-period L] [--gantt]
    cyclosched simulate -i schedule.json | -i tasks.json [--base-period L]
    cyclosched bench    [--kind random|prime|fibonacci] [--runs N] [--seed S] [--csv FILE]

Exit codes: 0 success, 1 no feasible base period, 2 invalid input,
3 internal assertion (optimizers disagree, or a schedule fails verification).
"""

import argparse
import json
import os
import sys

from cyclosched.bench import KINDS, GeneratorConfig, efficiency_experiment
from cyclosched.errors import (
    CycloschedError, InfeasibleBasePeriod, NoFeasibleBasePeriod, OracleMismatch,
    ParseError)
from cyclosched.objective import format_table, objective_table
from cyclosched.optimizer import brute_force_optimize, bnb_optimize, check_optimize
from cyclosched.schedule import build_schedule, render_gantt, schedule_from_dict
from cyclosched.taskset import load_task_set, task_set_from_dict, to_fraction
from cyclosched.verify import verify_schedule

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

SEED_ENV = "CYCLOSCHED_SEED"


def _emit(text: str, path=None):
    if not text.endswith("\n"):
        text += "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def _pick_L(ts, requested):
    return requested if requested is not None else bnb_optimize(ts).best_L


def cmd_optimize(args) -> int:
    ts = load_task_set(args.input)
    if args.check:
        bnb, oracle = check_optimize(ts)
        doc = bnb.to_dict()
        doc["check"] = {"agree": True, "oracle_steps": oracle.steps,
                        "bnb_steps": bnb.steps}
    elif args.oracle:
        doc = brute_force_optimize(ts).to_dict()
    else:
        doc = bnb_optimize(ts).to_dict()
    _emit(_dump(doc), args.output)
    return EXIT_OK


def cmd_table(args) -> int:
    ts = load_task_set(args.input)
    rows = objective_table(ts)
    if args.json:
        _emit(_dump([r.to_dict() for r in rows]), args.output)
    else:
        _emit(format_table(rows, args.digits), args.output)
    return EXIT_OK


def cmd_schedule(args) -> int:
    ts = load_task_set(args.input)
    sched = build_schedule(ts, _pick_L(ts, args.base_period))
    if args.gantt:
        if args.output not in (None, "-"):
            _emit(_dump(sched.to_dict()), args.output)
        _emit(render_gantt(sched))
    else:
        _emit(_dump(sched.to_dict()), args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(doc, dict) and "cycle_order" in doc:
        sched = schedule_from_dict(doc)
    else:
        ts = task_set_from_dict(doc)
        sched = build_schedule(ts, _pick_L(ts, args.base_period))
    report = verify_schedule(sched)
    out = report.to_dict()
    out["L"] = sched.L
    out["Tc"] = sched.hyperperiod_Tc
    _emit(_dump(out), args.output)
    return EXIT_OK if report.passed else EXIT_INTERNAL


def cmd_bench(args) -> int:
    seed = args.seed
    if os.environ.get(SEED_ENV):
        seed = int(os.environ[SEED_ENV], 0)
    cfg = GeneratorConfig(
        kind=args.kind, M=args.M, period_min=args.period_min,
        period_max=args.period_max, start_index=args.start_index,
        seed=seed, runs=args.runs, overhead=to_fraction(args.overhead))
    report = efficiency_experiment(cfg)
    if args.csv:
        _emit(report.to_csv(), args.csv)
    doc = report.to_dict()
    if not args.records:
        doc.pop("records")
    _emit(_dump(doc), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclosched",
        description="Base-period optimization and cyclic schedule synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_io(p, need_input=True):
        if need_input:
            p.add_argument("-i", "--input", required=True, help="task-set JSON")
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        return p

    p = with_io(sub.add_parser("optimize", help="find the optimal base period"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--oracle", action="store_true", help="exhaustive search instead of B&B")
    g.add_argument("--check", action="store_true", help="run both and require agreement")
    p.set_defaults(func=cmd_optimize)

    p = with_io(sub.add_parser("table", help="objective for every L from T1 to 1"))
    p.add_argument("--digits", type=int, default=3)
    p.add_argument("--json", action="store_true", help="full breakdowns as JSON")
    p.set_defaults(func=cmd_table)

    p = with_io(sub.add_parser("schedule", help="build the cyclic timetable"))
    p.add_argument("--base-period", type=int, default=None,
                   help="base period L (default: the optimum)")
    p.add_argument("--gantt", action="store_true", help="print a text Gantt chart")
    p.set_defaults(func=cmd_schedule)

    p = with_io(sub.add_parser("simulate", help="replay and verify a schedule"))
    p.add_argument("--base-period", type=int, default=None,
                   help="when given a task set: base period L (default: the optimum)")
    p.set_defaults(func=cmd_simulate)

    p = with_io(sub.add_parser("bench", help="B&B vs brute-force step counts"), need_input=False)
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--period-min", type=int, default=5)
    p.add_argument("--period-max", type=int, default=50)
    p.add_argument("--start-index", type=int, default=None,
                   help="first prime/Fibonacci index (default 2 for prime, 5 for fibonacci)")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help=f"overridden by ${SEED_ENV}")
    p.add_argument("--overhead", default="0.2", help="switch overhead p (exact decimal)")
    p.add_argument("--csv", default=None, help="also write one CSV row per run")
    p.add_argument("--records", action="store_true", help="include per-run records in JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "start_index", 0) is None:
        args.start_index = {"prime": 2, "fibonacci": 5}.get(args.kind, 1)
    try:
        return args.func(args)
    except (NoFeasibleBasePeriod, InfeasibleBasePeriod) as exc:
        print(f"cyclosched: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OracleMismatch as exc:
        print(f"cyclosched: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (CycloschedError, ValueError, OSError) as exc:
        print(f"cyclosched: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
