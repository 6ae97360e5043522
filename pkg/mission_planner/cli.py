"""
Command-line front end: gen, plan, validate, simulate and bench.
"""

import sys
import logging
import argparse
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import get_config, load_user_config, setup_logging

from .bench import dispatch, format_summary, make_cells, run_sweep, run_trial_cell, summarize, \
    sweep_plot_data, write_metrics
from .exceptions import (
    DisconnectedGround, GenerationFailed, InfeasibleInstance, InvalidEnvironment, MissionPlannerError,
    ScenarioParseError,
)
from .models import VehicleParams
from .planner import MissionPlanner, objective, validate
from .plot_data import execution_plot_data, plan_plot_data
from .presets import get_all_presets, get_preset
from .serialization import (
    load_plan, load_scenario, plan_to_document, save_plan, save_scenario, scenario_to_document,
    write_csv, write_json,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INFEASIBLE = 4
EXIT_GENERATION = 5
EXIT_VALIDATION = 6
EXIT_DISCONNECTED = 7


def _overrides(args) -> Dict[str, Any]:
    return {
        "delta_a": getattr(args, "delta_a", None),
        "delta_g": getattr(args, "delta_g", None),
        "gamma": getattr(args, "gamma", None),
        "v_g": getattr(args, "ugv_speed", None),
    }


def _check_overrides(args):
    """Raise ValueError for parameter overrides the vehicle model rejects."""
    for name, value in _overrides(args).items():
        for v in value if isinstance(value, list) else [value]:
            if v is not None:
                VehicleParams().replace(**{name: v})


def _plot_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}.plot.json")


def cmd_gen(args, settings: Dict[str, Any]) -> int:
    preset = get_preset(args.preset, load_user_config(settings["MISSION_USER_CONFIG"]))
    try:
        scenario = preset.generate(args.seed, args.n, args.m, _overrides(args))
    except ValueError as e:
        print(f"gen: {e}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out or Path(settings["MISSION_OUTPUT_DIR"]) /
               f"scenario_{preset.name}_n{args.n}_m{args.m}_s{args.seed}.json")
    save_scenario(out, scenario)
    print(f"scenario: {out} (n={scenario.n}, m={scenario.m}, seed={args.seed})")
    return EXIT_OK


def cmd_plan(args, settings: Dict[str, Any]) -> int:
    scenario = load_scenario(args.scenario)
    changes = {k: v for k, v in _overrides(args).items() if v is not None}
    try:
        if changes:
            scenario = replace(scenario, params=scenario.params.replace(**changes))
    except ValueError as e:
        print(f"plan: {e}", file=sys.stderr)
        return EXIT_USAGE
    planner = MissionPlanner(scenario, jobs=args.jobs or settings["MISSION_JOBS"])
    mission = planner.plan()

    out = Path(args.out or Path(settings["MISSION_OUTPUT_DIR"]) / f"{Path(args.scenario).stem}.plan.json")
    save_plan(out, mission, scenario)
    if args.emit_plot_data:
        write_json(_plot_path(out), plan_plot_data(mission, scenario))
    tours = sum(len(plan.tours()) for plan in mission.team_plans)
    print(f"plan: {out} objective={objective(mission, scenario.params, scenario.environment):.1f} s "
          f"planning_time={planner.planning_time:.3f} s tours={tours} teams={scenario.m}")
    return EXIT_OK


def cmd_validate(args, settings: Dict[str, Any]) -> int:
    scenario = load_scenario(args.scenario)
    mission = load_plan(args.plan)
    report = validate(mission, scenario)
    for check in report.failures:
        where = ", ".join(f"{k}={v}" for k, v in (("team", check.team), ("row", check.row),
                                                   ("column", check.column)) if v is not None)
        slack = "" if check.slack is None else f" slack={check.slack:.3f} s"
        print(f"✗ {check.constraint.value} [{where}]{slack} {check.message}")
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_simulate(args, settings: Dict[str, Any]) -> int:
    scenario = load_scenario(args.scenario)
    mission = load_plan(args.plan)
    scenario_doc = scenario_to_document(scenario)
    plan_doc = plan_to_document(mission, scenario)
    cells = [
        {"scenario": scenario_doc, "plan": plan_doc, "seed": args.seed + t, "obstacles": args.obstacles,
         "max_size": args.max_size, "slowdown": args.slowdown, "budget_scale": args.budget_scale,
         "block_stops": not args.protect_stops}
        for t in range(args.trials)
    ]
    results = dispatch(run_trial_cell, "mission.simulate_trial", cells,
                       jobs=args.jobs or settings["MISSION_JOBS"], use_async=settings["MISSION_ASYNC"])
    results.sort(key=lambda r: r["report"]["seed"])
    rows: List[Dict[str, Any]] = [row for r in results for row in r["rows"]]

    out = Path(args.out or Path(settings["MISSION_OUTPUT_DIR"]) / f"{Path(args.plan).stem}.sim.csv")
    write_csv(out, rows)
    if args.emit_plot_data:
        write_json(_plot_path(out), execution_plot_data(rows))
    violations = sum(r["report"]["energy_violations"] for r in results)
    failed = sum(1 for r in results if not r["report"]["success"])
    print(f"simulate: {out} trials={len(results)} energy_violations={violations} "
          f"trials_with_violations={failed}")
    return EXIT_OK


def cmd_bench(args, settings: Dict[str, Any]) -> int:
    user_config = load_user_config(settings["MISSION_USER_CONFIG"]) if args.preset == "custom" else {}
    preset = get_preset(args.preset, user_config)
    default_n, default_m = preset.default_grid()
    seeds = list(range(args.seed, args.seed + args.repeats))
    try:
        _check_overrides(args)
        for n in args.n or default_n:
            for m in args.m or default_m:
                if n >= m:
                    preset.validate_size(n, m)
    except ValueError as e:
        print(f"bench: {e}", file=sys.stderr)
        return EXIT_USAGE
    cells = make_cells(
        preset.name, args.n or default_n, args.m or default_m, seeds,
        gammas=args.gamma or [None], ugv_speeds=args.ugv_speed or [None],
        delta_a=args.delta_a, delta_g=args.delta_g,
        obstacles=args.obstacles, trials=args.trials, max_size=args.max_size, user_config=user_config,
    )
    rows = run_sweep(cells, jobs=args.jobs or settings["MISSION_JOBS"],
                     use_async=args.use_async or settings["MISSION_ASYNC"])

    out = Path(args.out or Path(settings["MISSION_OUTPUT_DIR"]) / f"bench_{preset.name}.csv")
    write_metrics(out, rows)
    if args.emit_plot_data:
        write_json(_plot_path(out), sweep_plot_data(rows))
    print(format_summary(summarize(rows)))
    print(f"bench: {out} rows={len(rows)}")
    return EXIT_OK


def _add_margin_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--delta-a", type=float, help="UAV robustness margin (s)")
    parser.add_argument("--delta-g", type=float, help="UGV robustness margin (s)")
    parser.add_argument("--gamma", type=float, help="Recharge ratio")


def build_parser() -> argparse.ArgumentParser:
    preset_names = sorted(cls.name for cls in get_all_presets())
    parser = argparse.ArgumentParser(prog="mission-planner",
                                     description="Robust energy-aware UAV-UGV mission planner")
    parser.add_argument("--log-level", help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a scenario file")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, default=25, help="Number of monitoring points")
    gen.add_argument("--m", type=int, default=1, help="Number of teams")
    gen.add_argument("--preset", choices=preset_names, default="table3")
    _add_margin_flags(gen)
    gen.add_argument("--ugv-speed", type=float, help="UGV speed (m/s)")
    gen.add_argument("--out", help="Scenario file path")

    plan = sub.add_parser("plan", help="Plan a scenario")
    plan.add_argument("scenario")
    _add_margin_flags(plan)
    plan.add_argument("--jobs", type=int, help="Worker processes for per-team planning")
    plan.add_argument("--out", help="Plan file path")
    plan.add_argument("--emit-plot-data", action="store_true", help="Write ground paths and flights as JSON")

    check = sub.add_parser("validate", help="Check a plan against every constraint")
    check.add_argument("plan")
    check.add_argument("scenario")

    simulate = sub.add_parser("simulate", help="Execute a plan in worlds with unknown obstacles")
    simulate.add_argument("plan")
    simulate.add_argument("scenario")
    simulate.add_argument("--seed", type=int, default=0, help="First trial seed")
    simulate.add_argument("--trials", type=int, default=10)
    simulate.add_argument("--obstacles", type=int, default=5, help="Unknown obstacles per trial")
    simulate.add_argument("--max-size", type=float, default=50.0, help="Largest obstacle edge (m)")
    simulate.add_argument("--slowdown", type=float, default=1.0, help="Multiplier on realized UAV times")
    simulate.add_argument("--budget-scale", type=float, default=1.0, help="Multiplier on adjustment budgets")
    simulate.add_argument("--protect-stops", action="store_true",
                          help="Keep planned release/collect stops clear of unknown obstacles")
    simulate.add_argument("--jobs", type=int)
    simulate.add_argument("--out", help="Report CSV path")
    simulate.add_argument("--emit-plot-data", action="store_true", help="Write planned vs realized times")

    bench = sub.add_parser("bench", help="Benchmark sweep over a preset grid")
    bench.add_argument("--preset", choices=preset_names, default="table3")
    bench.add_argument("--n", type=int, nargs="+", help="Point counts (preset default grid)")
    bench.add_argument("--m", type=int, nargs="+", help="Team counts (preset default grid)")
    bench.add_argument("--repeats", type=int, default=25, help="Seeds per cell")
    bench.add_argument("--seed", type=int, default=0, help="First seed")
    bench.add_argument("--gamma", type=float, nargs="+", help="Recharge ratios to sweep")
    bench.add_argument("--ugv-speed", type=float, nargs="+", help="UGV speeds to sweep (m/s)")
    bench.add_argument("--delta-a", type=float)
    bench.add_argument("--delta-g", type=float)
    bench.add_argument("--obstacles", type=int, default=0, help="Unknown obstacles per simulated trial")
    bench.add_argument("--trials", type=int, default=0, help="Simulated trials per run")
    bench.add_argument("--max-size", type=float, default=50.0)
    bench.add_argument("--jobs", type=int)
    bench.add_argument("--async", dest="use_async", action="store_true", help="Dispatch cells to Celery workers")
    bench.add_argument("--out", help="Metrics CSV path")
    bench.add_argument("--emit-plot-data", action="store_true", help="Write per-figure series as JSON")
    return parser


COMMANDS = {
    "gen": cmd_gen,
    "plan": cmd_plan,
    "validate": cmd_validate,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    settings = get_config()
    setup_logging(args.log_level or settings["LOG_LEVEL"], settings["LOG_FILE"])
    try:
        return COMMANDS[args.command](args, settings)
    except (ScenarioParseError, InvalidEnvironment) as e:
        logging.error(f"{args.command}: {e}")
        return EXIT_PARSE
    except InfeasibleInstance as e:
        logging.error(f"{args.command}: infeasible instance: {e}")
        return EXIT_INFEASIBLE
    except GenerationFailed as e:
        logging.error(f"{args.command}: {e}")
        return EXIT_GENERATION
    except DisconnectedGround as e:
        logging.error(f"{args.command}: {e}")
        return EXIT_DISCONNECTED
    except FileNotFoundError as e:
        logging.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except MissionPlannerError as e:
        logging.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
