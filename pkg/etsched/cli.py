"""Command line front end.

Results go to stdout (or ``-o``), diagnostics to the log on stderr. Exit
codes: 0 success, 1 internal error or solver disagreement, 2 bad input.
"""

import argparse
import logging
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .config import config
from .dispatch import budget_sweep, compare, make_solver, run_oracle, solve_instance
from .errors import BadSpec, EmptyJobSet, EtschedError
from .logging_setup import configure_logging
from .model import (
    MINENERGY, MODES, NONPREEMPTIVE, PREEMPTIVE, Instance, format_rational,
    parse_rational, validate_instance, validate_schedule,
)
from .reductions import knapsack_to_schedule
from .schemas import (
    dump_json, instance_to_document, load_instance_document, load_knapsack_document,
    load_schedule_document, oracle_result_to_document, rationals_to_document,
    read_json_file, report_to_document, result_to_document,
)
from .timepoints import GAMMA, OMEGA, PHI, THETA, build_points

logger = logging.getLogger(__name__)

JSON, TABLE = "json", "table"


@dataclass(frozen=True)
class GenSpec:
    n: int
    max_time: int
    max_work: int
    max_weight: int = 1
    equal_work: bool = False
    seed: int = 0
    alpha: int = 3
    budget: Fraction = Fraction(1)

    def check(self) -> None:
        if self.n < 0:
            raise BadSpec(f"n must be nonnegative, got {self.n}")
        for name in ("max_time", "max_work", "max_weight"):
            if getattr(self, name) < 1:
                raise BadSpec(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.budget < 0:
            raise BadSpec(f"budget must be nonnegative, got {self.budget}")


def generate_document(spec: GenSpec) -> Dict[str, Any]:
    """A random instance document, identical for identical specs."""
    spec.check()
    rng = random.Random(spec.seed)
    shared = rng.randint(1, spec.max_work) if spec.equal_work else None
    jobs = []
    for job_id in range(1, spec.n + 1):
        r = rng.randint(0, spec.max_time - 1)
        d = rng.randint(r + 1, spec.max_time)
        p = shared if shared is not None else rng.randint(1, spec.max_work)
        w = rng.randint(1, spec.max_weight)
        jobs.append({"id": job_id, "r": r, "d": d, "p": p, "w": w})
    doc = {"alpha": spec.alpha, "budget": format_rational(spec.budget), "jobs": jobs}
    validate_instance(doc, default_alpha=spec.alpha)
    return doc


def format_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [["-" if v is None else str(v) for v in row] for row in rows]
    widths = [max(len(row[col]) for row in cells) for col in range(len(headers))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)


def _write(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info(f"Wrote {args.output}")
    else:
        sys.stdout.write(text + "\n")


def _load_instance(args) -> Instance:
    budget = parse_rational(args.budget) if getattr(args, "budget", None) is not None else None
    return load_instance_document(read_json_file(args.instance, "instance"),
                                  alpha=getattr(args, "alpha", None), budget=budget)


def _segment_rows(schedule_doc: Dict[str, Any]) -> List[List[Any]]:
    return [[seg["job"], seg["start"], seg["end"], seg["speed"]] for seg in schedule_doc["segments"]]


def cmd_solve(args) -> int:
    inst = _load_instance(args)
    if args.dump_table and args.mode != MINENERGY:
        solver = make_solver(inst, args.mode, args.weighted, args.wide_x)
        result = solver.solve()
        solver.dump_table(args.dump_table)
    else:
        result = solve_instance(inst, args.mode, args.weighted, args.wide_x)
    doc = result_to_document(result, inst.alpha, inst.origin)
    if args.format == JSON:
        _write(args, dump_json(doc))
    else:
        summary = format_table(["mode", "weighted", "objective", "energy", "budget"],
                               [[doc["mode"], doc["weighted"], doc["objective"], doc["energy"],
                                 format_rational(inst.budget)]])
        segments = format_table(["job", "start", "end", "speed"], _segment_rows(doc["schedule"]))
        _write(args, summary + "\n\n" + segments)
    return 0


def cmd_oracle(args) -> int:
    inst = _load_instance(args)
    result = run_oracle(inst, args.mode, args.weighted, args.jobs)
    doc = oracle_result_to_document(result, args.mode, args.weighted, inst.alpha, inst.origin)
    if args.format == JSON:
        _write(args, dump_json(doc))
    else:
        _write(args, format_table(["mode", "objective", "subset", "energy"],
                                  [[args.mode, doc["objective"], ",".join(map(str, doc["best_subset"])),
                                    doc["energy"]]]))
    return 0


def cmd_gen(args) -> int:
    defaults = config.get_generator_defaults()

    def pick(name: str):
        value = getattr(args, name)
        return defaults[name] if value is None else value

    spec = GenSpec(
        n=pick("n"),
        max_time=pick("max_time"),
        max_work=pick("max_work"),
        max_weight=pick("max_weight"),
        equal_work=args.equal_work or defaults["equal_work"],
        seed=pick("seed"),
        alpha=args.alpha if args.alpha is not None else config.default_alpha(),
        budget=parse_rational(pick("budget")),
    )
    _write(args, dump_json(generate_document(spec)))
    return 0


def cmd_check(args) -> int:
    inst = _load_instance(args)
    schedule = load_schedule_document(read_json_file(args.schedule, "schedule"), inst.origin)
    report = validate_schedule(inst, schedule, args.mode)
    doc = report_to_document(report)
    if args.format == JSON:
        _write(args, dump_json(doc))
    else:
        rows = [[v["kind"], v["job"], v["message"]] for v in doc["violations"]]
        _write(args, f"energy: {doc['energy']}  budget: {format_rational(inst.budget)}  ok: {doc['ok']}\n"
                     + format_table(["kind", "job", "message"], rows))
    return 0 if report.ok else 2


def cmd_compare(args) -> int:
    inst = _load_instance(args)
    rows, problems = compare(inst, args.weighted, args.jobs)
    if args.format == JSON:
        _write(args, dump_json({
            "rows": [{"solver": row.solver, "objective": row.objective,
                      "energy": None if row.energy is None else format_rational(row.energy),
                      "note": row.note} for row in rows],
            "disagreements": problems,
        }))
    else:
        table = format_table(["solver", "objective", "energy", "note"],
                             [[row.solver, row.objective,
                               None if row.energy is None else format_rational(row.energy), row.note]
                              for row in rows])
        _write(args, table + "".join(f"\nDISAGREEMENT: {p}" for p in problems))
    return 1 if problems else 0


def cmd_points(args) -> int:
    inst = _load_instance(args)
    s = parse_rational(args.s) - inst.origin if args.s is not None else None
    points = build_points(args.kind, inst, s)
    values = rationals_to_document(point + inst.origin for point in points)
    if args.format == JSON:
        _write(args, dump_json(values))
    else:
        _write(args, f"{args.kind}: {len(values)} points\n" + " ".join(str(v) for v in values))
    return 0


def cmd_reduce_knapsack(args) -> int:
    kp = load_knapsack_document(read_json_file(args.knapsack, "knapsack"))
    if not kp.items:
        raise EmptyJobSet("knapsack has no items, the reduced instance would have no jobs")
    inst = knapsack_to_schedule(kp, args.alpha)
    _write(args, dump_json(instance_to_document(inst)))
    return 0


def cmd_sweep(args) -> int:
    inst = _load_instance(args)
    budgets = [parse_rational(b) for b in args.budgets.split(",") if b.strip()]
    if not budgets:
        raise BadSpec("--budgets needs at least one value")
    rows = budget_sweep(inst, budgets, args.mode, args.weighted)
    if args.format == JSON:
        _write(args, dump_json([{"budget": format_rational(b), "objective": obj, "energy": format_rational(e)}
                                for b, obj, e in rows]))
    else:
        _write(args, format_table(["budget", "objective", "energy"],
                                  [[format_rational(b), obj, format_rational(e)] for b, obj, e in rows]))
    return 0


def _instance_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("instance", help="instance JSON file")
    parser.add_argument("--alpha", type=int, help="override the power exponent")
    parser.add_argument("--budget", help="override the energy budget (int or num/den)")


def _output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[JSON, TABLE], default=JSON)
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etsched",
                                     description="Throughput maximization under an energy budget")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="configuration file (default: ./config.ini)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance with a dynamic program or YDS")
    _instance_args(p)
    p.add_argument("--mode", choices=MODES, default=PREEMPTIVE)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--wide-x", action="store_true", help="non-preemptive: end points over all of Theta")
    p.add_argument("--dump-table", metavar="CSV", help="write the memo table as CSV")
    _output_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="solve an instance by exhaustive search")
    _instance_args(p)
    p.add_argument("--mode", choices=[PREEMPTIVE, NONPREEMPTIVE], default=PREEMPTIVE)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for subset evaluation")
    _output_args(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int)
    p.add_argument("--max-time", type=int)
    p.add_argument("--max-work", type=int)
    p.add_argument("--max-weight", type=int)
    p.add_argument("--equal-work", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=int)
    p.add_argument("--budget")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="validate a schedule against an instance")
    _instance_args(p)
    p.add_argument("schedule", help="schedule JSON file")
    p.add_argument("--mode", choices=[PREEMPTIVE, NONPREEMPTIVE], default=PREEMPTIVE)
    _output_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compare", help="cross-check both dynamic programs against the oracles")
    _instance_args(p)
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the preemptive oracle")
    _output_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("points", help="print a time-point set")
    _instance_args(p)
    p.add_argument("--kind", choices=[OMEGA, PHI, THETA, GAMMA], default=OMEGA)
    p.add_argument("--s", help="the point whose Gamma successors are wanted")
    _output_args(p)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("reduce-knapsack", help="turn a knapsack instance into a scheduling instance")
    p.add_argument("knapsack", help="knapsack JSON file")
    p.add_argument("--alpha", type=int)
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_reduce_knapsack)

    p = sub.add_parser("sweep", help="objective for each of several budgets")
    _instance_args(p)
    p.add_argument("--budgets", required=True, help="comma-separated budgets, e.g. 0,1/4,1,2")
    p.add_argument("--mode", choices=MODES, default=PREEMPTIVE)
    p.add_argument("--weighted", action="store_true")
    _output_args(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.config:
        config.use_file(args.config)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except EtschedError as e:
        logger.debug(f"{type(e).__name__}: {e.message}")
        sys.stderr.write(f"error: {e.message}\n")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Internal error: {e}")
        return 1
