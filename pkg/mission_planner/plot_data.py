"""
Plot-ready data series for plans and simulated executions.

Only data is produced here; rendering is left to external tooling.
"""

from typing import Any, Dict, List, Sequence

from .kinematics import flight_waypoints
from .models import MissionPlan, Scenario
from .planner import ugv_route


def plan_plot_data(mission: MissionPlan, scenario: Scenario) -> Dict[str, Any]:
    """Per team: the UGV ground path through all its stops and every UAV flight polyline."""
    env, params = scenario.environment, scenario.params
    teams = []
    for plan in mission.team_plans:
        stops = ugv_route(plan)
        ground: List[List[float]] = [stops[0].to_list()]
        for a, b in zip(stops, stops[1:]):
            ground.extend(p.to_list() for p in env.ground_shortest_path(a, b).waypoints[1:])
        teams.append({
            "team": plan.team.index,
            "ugv_path": ground,
            "uav_tours": [[p.to_list() for p in flight_waypoints(params, row)] for _, row in plan.tours()],
        })
    return {
        "kind": "plan",
        "bounds": list(env.bounds),
        "obstacles": [o.to_dict() for o in env.known_obstacles],
        "points": [p.to_list() for p in scenario.points],
        "teams": teams,
    }


def execution_plot_data(rows: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    """Planned against realized tour times from execution report rows (one per tour)."""
    keys = ("seed", "team", "tour", "planned_tau_a", "realized_tau_a", "planned_tau_g", "realized_tau_g",
            "release_shift", "collect_shift")
    return {"kind": "execution", "tours": [{k: row[k] for k in keys} for row in rows]}
