"""
JSON documents for scenarios and plans, CSV for metrics and execution reports.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .exceptions import ScenarioParseError
from .geometry import Environment
from .models import MissionPlan, Point3, Scenario, Team, TeamPlan, VehicleParams
from .planner import objective, team_summary
from .robustness import tour_robustness
from .kinematics import row_times

SCENARIO_SCHEMA = "uav-ugv-scenario/1"
PLAN_SCHEMA = "uav-ugv-plan/1"


def scenario_to_document(scenario: Scenario) -> Dict[str, Any]:
    return {
        "schema": SCENARIO_SCHEMA,
        "seed": scenario.seed,
        "preset": scenario.preset,
        "vtol_assumption": scenario.vtol_assumption,
        "environment": scenario.environment.to_dict(),
        "params": scenario.params.to_dict(),
        "teams": [team.to_dict() for team in scenario.teams],
        "points": [p.to_list() for p in scenario.points],
    }


def scenario_from_document(doc: Dict[str, Any]) -> Scenario:
    """Build a Scenario from its JSON document.

    Raises:
        ScenarioParseError: wrong schema tag, missing blocks or invalid values
    """
    if not isinstance(doc, dict) or doc.get("schema") != SCENARIO_SCHEMA:
        raise ScenarioParseError(f"Expected schema {SCENARIO_SCHEMA!r}")
    try:
        params = VehicleParams.from_dict(doc["params"])
        env_block = dict(doc["environment"])
        env_block.setdefault("min_flight_altitude", params.z_min)
        env = Environment.from_dict(env_block)
        teams = tuple(Team.from_dict(t) for t in doc["teams"])
        points = tuple(Point3.from_list(p) for p in doc["points"])
        return Scenario(env, params, teams, points, seed=doc.get("seed"), preset=doc.get("preset", "custom"),
                        vtol_assumption=bool(doc.get("vtol_assumption", True)))
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioParseError(f"Invalid scenario document: {e}") from e


def plan_to_document(mission: MissionPlan, scenario: Scenario) -> Dict[str, Any]:
    """Plan document with per-tour times, robustness values and a per-team summary."""
    params, env = scenario.params, scenario.environment
    teams = []
    for plan in mission.team_plans:
        rows = []
        for i, row in enumerate(plan.rows):
            tau_a, tau_g = row_times(params, env, row)
            robustness = tour_robustness(plan, i, params, env)
            entry = row.to_dict()
            entry.update({
                "tour_time": tau_a,
                "ugv_time": tau_g,
                "delta_hat_a": robustness.delta_hat_a,
                "delta_hat_g": robustness.delta_hat_g,
            })
            rows.append(entry)
        teams.append({
            "team": plan.team.to_dict(),
            "rows": rows,
            "summary": team_summary(plan, params, env),
        })
    return {
        "schema": PLAN_SCHEMA,
        "scenario_seed": scenario.seed,
        "objective": objective(mission, params, env),
        "teams": teams,
    }


def plan_from_document(doc: Dict[str, Any]) -> MissionPlan:
    """Rebuild the MissionPlan; derived numbers in the document are ignored."""
    if not isinstance(doc, dict) or doc.get("schema") != PLAN_SCHEMA:
        raise ScenarioParseError(f"Expected schema {PLAN_SCHEMA!r}")
    try:
        return MissionPlan(tuple(TeamPlan.from_dict(t) for t in doc["teams"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioParseError(f"Invalid plan document: {e}") from e


def dumps(doc: Dict[str, Any]) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, doc: Dict[str, Any]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc), encoding="utf-8")
    logging.info(f"Wrote {path}")


def read_json(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{path}: not valid JSON ({e})") from e


def load_scenario(path: Path) -> Scenario:
    return scenario_from_document(read_json(path))


def save_scenario(path: Path, scenario: Scenario):
    write_json(path, scenario_to_document(scenario))


def load_plan(path: Path) -> MissionPlan:
    return plan_from_document(read_json(path))


def save_plan(path: Path, mission: MissionPlan, scenario: Scenario):
    write_json(path, plan_to_document(mission, scenario))


def write_csv(path: Path, rows: Iterable[Dict[str, Any]], fieldnames: Optional[Sequence[str]] = None):
    """Write dict rows as CSV; columns default to the keys of the first row."""
    rows = list(rows)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns: List[str] = list(fieldnames or (rows[0].keys() if rows else []))
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    logging.info(f"Wrote {len(rows)} rows to {path}")
