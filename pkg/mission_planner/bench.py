"""
Benchmark sweeps.

A sweep is a list of JSON-serializable cells (preset, seed, n, m and parameter
overrides). Each cell is planned independently, inline, in a local process pool
or on Celery workers, and the resulting metrics rows are sorted before writing.
"""

import math
import time
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import groupby, product
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .exceptions import GenerationFailed, InfeasibleInstance, TooLarge
from .oracle import exact_plan
from .planner import MissionPlanner, mission_time, objective
from .presets import get_preset
from .serialization import plan_from_document, scenario_from_document, write_csv
from .simulator import run_trial

# Trial seeds of a cell are seed * TRIAL_STRIDE + t, so cells never share a trial.
TRIAL_STRIDE = 10_000

METRICS_COLUMNS = [
    "preset", "seed", "n", "m", "gamma", "v_g", "delta_a", "delta_g", "status",
    "planning_time", "objective", "team_times", "tours", "trials", "violation_count",
    "oracle_objective", "ratio",
]


@dataclass
class MetricsRow:
    """Outcome of one planning run in a sweep."""
    preset: str
    seed: int
    n: int
    m: int
    gamma: float
    v_g: float
    delta_a: float
    delta_g: float
    status: str = "ok"
    planning_time: Optional[float] = None
    objective: Optional[float] = None
    team_times: List[float] = field(default_factory=list)
    tours: int = 0
    trials: int = 0
    violation_count: int = 0
    oracle_objective: Optional[float] = None
    ratio: Optional[float] = None

    @property
    def group_key(self):
        return (self.preset, self.n, self.m, self.gamma, self.v_g, self.delta_a, self.delta_g)

    @property
    def sort_key(self):
        return (*self.group_key, self.seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricsRow":
        return cls(**data)

    def to_csv_row(self) -> Dict[str, Any]:
        row = self.to_dict()
        row["team_times"] = ";".join(f"{t:.3f}" for t in self.team_times)
        for key in ("planning_time", "objective", "oracle_objective", "ratio"):
            row[key] = "" if row[key] is None else round(row[key], 6)
        return row


def make_cells(preset: str, n_values: Sequence[int], m_values: Sequence[int], seeds: Sequence[int],
               gammas: Sequence[Optional[float]] = (None,), ugv_speeds: Sequence[Optional[float]] = (None,),
               delta_a: Optional[float] = None, delta_g: Optional[float] = None,
               obstacles: int = 0, trials: int = 0, max_size: float = 50.0,
               user_config: Optional[Dict[str, Any]] = None) -> List[Dict[str, Any]]:
    """Cross product of the grid and seed list; cells with n < m are skipped."""
    cells = []
    for n, m, gamma, v_g, seed in product(n_values, m_values, gammas, ugv_speeds, seeds):
        if n < m:
            logging.debug(f"Skipping cell n={n} < m={m}")
            continue
        cells.append({
            "preset": preset, "seed": int(seed), "n": int(n), "m": int(m),
            "overrides": {"gamma": gamma, "v_g": v_g, "delta_a": delta_a, "delta_g": delta_g},
            "obstacles": int(obstacles), "trials": int(trials), "max_size": float(max_size),
            "user_config": user_config or {},
        })
    return cells


def run_bench_cell(cell: Dict[str, Any]) -> Dict[str, Any]:
    """Generate, plan and optionally simulate and solve exactly one cell.

    Returns:
        MetricsRow as a dict (JSON-serializable for Celery)
    """
    preset = get_preset(cell["preset"], cell.get("user_config"))
    scenario = preset.generate(cell["seed"], cell["n"], cell["m"], cell.get("overrides"))
    params, env = scenario.params, scenario.environment
    row = MetricsRow(preset=preset.name, seed=cell["seed"], n=scenario.n, m=scenario.m,
                     gamma=params.gamma, v_g=params.v_g, delta_a=params.delta_a, delta_g=params.delta_g)

    planner = MissionPlanner(scenario)
    started = time.perf_counter()
    try:
        mission = planner.plan()
    except InfeasibleInstance as e:
        logging.warning(f"Cell seed={row.seed} n={row.n} m={row.m}: {e}")
        row.status = "infeasible"
        row.planning_time = time.perf_counter() - started
        return row.to_dict()

    row.planning_time = planner.planning_time
    row.objective = objective(mission, params, env)
    row.team_times = [mission_time(plan, params, env) for plan in mission.team_plans]
    row.tours = sum(len(plan.tours()) for plan in mission.team_plans)

    if cell.get("obstacles", 0) > 0 and cell.get("trials", 0) > 0:
        row.trials = cell["trials"]
        for t in range(cell["trials"]):
            try:
                report = run_trial(scenario, mission, row.seed * TRIAL_STRIDE + t, cell["obstacles"],
                                   cell.get("max_size", 50.0))
            except GenerationFailed as e:
                logging.warning(f"Cell seed={row.seed} trial {t}: {e}")
                row.status = "generation_failed"
                continue
            row.violation_count += report.energy_violations

    if preset.uses_oracle:
        try:
            _, row.oracle_objective = exact_plan(scenario)
            if row.oracle_objective > 0:
                row.ratio = row.objective / row.oracle_objective
        except (TooLarge, InfeasibleInstance) as e:
            logging.warning(f"Oracle skipped for seed={row.seed} n={row.n}: {e}")
    return row.to_dict()


def run_trial_cell(cell: Dict[str, Any]) -> Dict[str, Any]:
    """Execute a stored plan once in a world with injected unknown obstacles.

    The cell carries the scenario and plan documents, so it can cross a process
    or network boundary unchanged.
    """
    scenario = scenario_from_document(cell["scenario"])
    mission = plan_from_document(cell["plan"])
    report = run_trial(scenario, mission, cell["seed"], cell["obstacles"], cell.get("max_size", 50.0),
                       slowdown=cell.get("slowdown", 1.0), budget_scale=cell.get("budget_scale", 1.0),
                       block_stops=cell.get("block_stops", True))
    return {"report": report.to_dict(), "rows": report.csv_rows()}


def dispatch(worker: Callable[[Dict[str, Any]], Dict[str, Any]], task_name: str,
             cells: Sequence[Dict[str, Any]], jobs: int = 1, use_async: bool = False,
             timeout: Optional[float] = None) -> List[Dict[str, Any]]:
    """Run cells inline, in a process pool, or as Celery tasks; results keep the cell order."""
    if use_async:
        from celery_app import celery

        results = [celery.send_task(task_name, args=[cell]) for cell in cells]
        logging.info(f"Queued {len(results)} {task_name} tasks")
        return [result.get(timeout=timeout) for result in results]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, cells))
    return [worker(cell) for cell in cells]


def run_sweep(cells: Sequence[Dict[str, Any]], jobs: int = 1, use_async: bool = False) -> List[MetricsRow]:
    """Run every cell and return the rows in deterministic order."""
    logging.info(f"Running {len(cells)} benchmark cells (jobs={jobs}, async={use_async})")
    rows = [MetricsRow.from_dict(r) for r in dispatch(run_bench_cell, "mission.bench_cell", cells, jobs, use_async)]
    return sorted(rows, key=lambda r: r.sort_key)


def _stats(values: Iterable[Optional[float]]) -> Dict[str, Optional[float]]:
    data = np.array([v for v in values if v is not None and math.isfinite(v)], dtype=float)
    if data.size == 0:
        return {"mean": None, "std": None, "median": None}
    return {"mean": float(data.mean()), "std": float(data.std()), "median": float(np.median(data))}


def summarize(rows: Sequence[MetricsRow]) -> List[Dict[str, Any]]:
    """Per-cell aggregates over seeds, one entry per (preset, n, m, gamma, v_g, margins)."""
    summary = []
    for key, group in groupby(sorted(rows, key=lambda r: r.sort_key), key=lambda r: r.group_key):
        group = list(group)
        preset, n, m, gamma, v_g, delta_a, delta_g = key
        objective_stats = _stats(r.objective for r in group)
        time_stats = _stats(r.planning_time for r in group)
        ratio_stats = _stats(r.ratio for r in group)
        summary.append({
            "preset": preset, "n": n, "m": m, "gamma": gamma, "v_g": v_g,
            "delta_a": delta_a, "delta_g": delta_g, "runs": len(group),
            "infeasible": sum(1 for r in group if r.status == "infeasible"),
            "objective_mean": objective_stats["mean"], "objective_std": objective_stats["std"],
            "planning_time_median": time_stats["median"], "planning_time_mean": time_stats["mean"],
            "ratio_mean": ratio_stats["mean"],
            "violation_count": sum(r.violation_count for r in group),
        })
    return summary


def format_summary(summary: Sequence[Dict[str, Any]]) -> str:
    """Text table with one line per cell."""
    lines = [f"{'n':>4} {'m':>3} {'gamma':>5} {'v_g':>5} {'runs':>4} {'time (s)':>10} "
             f"{'mission (s)':>18} {'ratio':>6} {'viol':>5}"]
    for s in summary:
        mission = "-" if s["objective_mean"] is None else f"{s['objective_mean']:.0f} ± {s['objective_std']:.0f}"
        planning = "-" if s["planning_time_median"] is None else f"{s['planning_time_median']:.3f}"
        ratio = "-" if s["ratio_mean"] is None else f"{s['ratio_mean']:.2f}"
        lines.append(f"{s['n']:>4} {s['m']:>3} {s['gamma']:>5g} {s['v_g']:>5g} {s['runs']:>4} {planning:>10} "
                     f"{mission:>18} {ratio:>6} {s['violation_count']:>5}")
    return "\n".join(lines)


def write_metrics(path, rows: Sequence[MetricsRow]):
    write_csv(path, (r.to_csv_row() for r in rows), METRICS_COLUMNS)


def sweep_plot_data(rows: Sequence[MetricsRow]) -> Dict[str, Any]:
    """Series for mission time, planning time and oracle ratio against n, one series per
    (m, gamma, v_g) combination. Each point is [n, mean, std]."""
    series: Dict[str, Dict[str, List[List[float]]]] = {
        "mission_time_vs_n": {}, "planning_time_vs_n": {}, "ratio_vs_n": {},
    }
    for s in summarize(rows):
        label = f"m={s['m']} gamma={s['gamma']:g} v_g={s['v_g']:g}"
        if s["objective_mean"] is not None:
            series["mission_time_vs_n"].setdefault(label, []).append([s["n"], s["objective_mean"], s["objective_std"]])
        group = [r for r in rows if r.group_key == (s["preset"], s["n"], s["m"], s["gamma"], s["v_g"],
                                                  s["delta_a"], s["delta_g"])]
        t = _stats(r.planning_time for r in group)
        if t["mean"] is not None:
            series["planning_time_vs_n"].setdefault(label, []).append([s["n"], t["mean"], t["std"]])
        r_stats = _stats(r.ratio for r in group)
        if r_stats["mean"] is not None:
            series["ratio_vs_n"].setdefault(label, []).append([s["n"], r_stats["mean"], r_stats["std"]])
    return {"kind": "sweep", "series": series}
