"""Command-line entry point.

Exit codes: 0 success, 1 I/O or other failure, 2 parse or input error,
3 infeasible, 4 limit reached without an incumbent.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .errors import InputError
from .experiment import format_table, run_experiment, spec_from_file
from .metrics import aggregate, report_run
from .mip import build_model, export_lp
from .plan import plan_coverage, plan_objective, violations
from .planner import plan_mission
from .simulator import InterferenceConfig, SimConfig, run
from .solver import SolverConfig

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_NO_INCUMBENT = 0, 1, 2, 3, 4


def _group(text: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    a, sep, b = text.partition(":")
    if not sep or not a or not b:
        raise argparse.ArgumentTypeError("expected A1,A2:B1,B2")
    return tuple(a.split(",")), tuple(b.split(","))


def _json(obj) -> str:
    return json.dumps(io.finite_or_null(obj), allow_nan=False)


def _global_flags(p, default):
    def d(v):
        return v if default else argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=d(None),
                   help="top-level random seed (default 0; experiment specs keep their own unless given)")
    p.add_argument("--threads", type=int, default=d(1), help="worker processes for simulation runs")
    p.add_argument("--out", type=Path, default=d(Path(".")), help="output directory")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sarplan", description=__doc__.splitlines()[0])
    _global_flags(p, default=True)
    # the same flags after the subcommand override the ones before it
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, default=False)
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(q):
        q.add_argument("--time-limit", type=float, default=60.0)
        q.add_argument("--gap", type=float, default=1e-6, help="target relative gap")
        q.add_argument("--node-limit", type=int)
        q.add_argument("--lp-engine", choices=("auto", "simplex", "highs"), default="auto")
        q.add_argument("--no-warm-start", action="store_true")

    def sim_flags(q):
        q.add_argument("--runs", type=int, default=50)
        q.add_argument("--tick", type=float, default=10.0, help="seconds per tick")
        q.add_argument("--interference", action="store_true", help="enable dog interference")
        q.add_argument("--interference-range", type=float, default=100.0)
        q.add_argument("--distance-group", type=_group, action="append", default=[],
                       metavar="A1,A2:B1,B2")
        q.add_argument("--hull-group", type=lambda s: tuple(s.split(",")))
        q.add_argument("--trace", action="store_true", help="write per-tick positions of run 0")

    q = sub.add_parser("plan", parents=[common], help="solve for a mission plan")
    q.add_argument("scenario")
    q.add_argument("--directives")
    solver_flags(q)
    q.add_argument("--plan-out", default="plan.json")

    q = sub.add_parser("simulate", parents=[common], help="simulate a plan")
    q.add_argument("scenario")
    q.add_argument("plan")
    sim_flags(q)

    q = sub.add_parser("evaluate", parents=[common], help="plan-level coverage and directive compliance")
    q.add_argument("scenario")
    q.add_argument("plan")
    q.add_argument("--directives")

    q = sub.add_parser("experiment", parents=[common], help="plan and simulate every variant of a study")
    q.add_argument("spec")

    q = sub.add_parser("export-lp", parents=[common], help="write the model in LP format")
    q.add_argument("scenario")
    q.add_argument("--directives")
    q.add_argument("--with-occupancy", action="store_true")
    q.add_argument("--lp-out", default="model.lp")
    return p


def _solver_config(args) -> SolverConfig:
    return SolverConfig(time_limit_s=args.time_limit, target_gap=args.gap, rng_seed=args.seed or 0,
                        node_limit=args.node_limit, lp_engine=args.lp_engine)


def cmd_plan(args) -> int:
    sc = io.read_scenario(args.scenario)
    dirs = io.read_directives(args.directives) if args.directives else []
    result = plan_mission(sc, dirs, _solver_config(args), warm=not args.no_warm_start)
    out = result.outcome
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "solver_log.jsonl", "w") as f:
        for entry in out.log:
            f.write(_json(entry) + "\n")
        f.write(_json({"summary": out.summary()}) + "\n")
    print(_json(out.summary()))
    if result.mission is not None:
        io.write_plan(result.mission, args.out / args.plan_out,
                      meta={k: v for k, v in out.summary().items() if k != "wall_time_s"})
        print(f"plan written to {args.out / args.plan_out}")
    if out.status == "infeasible":
        return EXIT_INFEASIBLE
    if out.status == "limit_no_incumbent":
        return EXIT_NO_INCUMBENT
    if out.status == "unbounded":
        return EXIT_FAIL
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc = io.read_scenario(args.scenario)
    mission = io.read_plan(args.plan)
    cfg = SimConfig(tick_s=args.tick, runs=args.runs, rng_seed=args.seed or 0,
                    interference=InterferenceConfig(args.interference, args.interference_range))
    results = run(mission, sc, cfg, workers=args.threads)
    rows = []
    for r in results:
        rep = report_run(r, sc, args.distance_group, args.hull_group)
        rows.append({"run": r.run, **rep.row(),
                     **{f"interference_s[{d}]": v for d, v in rep.interference_s.items()}})
    args.out.mkdir(parents=True, exist_ok=True)
    io.write_rows_csv(rows, args.out / "runs.csv")
    agg = aggregate([{k: v for k, v in r.items() if k != "run"} for r in rows])
    io.write_summary({"runs": len(rows), "metrics": agg}, args.out / "summary.json")
    if args.trace:
        io.write_trace(results[0].positions, sc.agent_ids, args.out / "trace.csv")
    for k, v in agg.items():
        print(f"{k}: mean {v['mean']:.4f} std {v['std']:.4f}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    sc = io.read_scenario(args.scenario)
    mission = io.read_plan(args.plan)
    dirs = io.read_directives(args.directives) if args.directives else []
    _, total = plan_coverage(mission, sc)
    report = {"coverage": total, "coverage_pct": 100.0 * total / max(float(sc.coverage_map.sum()), 1e-300),
              "objective": plan_objective(mission, sc, dirs),
              "violation_m": [v.tolist() for v in violations(mission, sc, dirs)]}
    print(_json(report))
    return EXIT_OK


def cmd_experiment(args) -> int:
    spec = spec_from_file(args.spec, seed=args.seed)
    out = spec.out if spec.out is not None else args.out
    report = run_experiment(spec, out, workers=args.threads)
    print(format_table(report["rows"]))
    for f in report["failures"]:
        print(f"FAILED {f['variant']}: {f['error']}")
    return EXIT_OK if not report["failures"] else EXIT_FAIL


def cmd_export_lp(args) -> int:
    sc = io.read_scenario(args.scenario)
    dirs = io.read_directives(args.directives) if args.directives else []
    model = build_model(sc, dirs, with_occupancy=args.with_occupancy)
    dest = args.out / args.lp_out
    export_lp(model, dest)
    print(json.dumps(model.counts()))
    return EXIT_OK


COMMANDS = {"plan": cmd_plan, "simulate": cmd_simulate, "evaluate": cmd_evaluate,
            "experiment": cmd_experiment, "export-lp": cmd_export_lp}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
