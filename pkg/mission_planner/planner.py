"""
Mission planner: runs the full pipeline per team, evaluates mission times and
validates plans against every constraint of the planning problem.
"""

import time
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

from .collect_select import build_collect_graph, finalize_team_plan, select_collect_points, trivial_team_plan
from .exceptions import DisconnectedGround
from .geometry import Environment
from .kinematics import recharge_time, row_times, tour_time, ugv_time
from .models import (
    Constraint, ConstraintCheck, MissionPlan, Point3, Scenario, Team, TeamPlan, ValidationReport,
    VehicleParams,
)
from .partition import assign_points
from .sequencing import plan_visit_sequence
from .tours import EPSILON, build_feasible_tours


def plan_team(team: Team, points: Sequence[Point3], params: VehicleParams, env: Environment) -> TeamPlan:
    """Sequence, pack and finalize one team's plan."""
    if not points:
        logging.info(f"Team {team.index}: no points assigned, driving straight to its finish")
        return trivial_team_plan(team)
    sequence = plan_visit_sequence(points, team.start, team.finish, env)
    logging.info(f"Team {team.index} Step 2.1: sequence of {len(sequence)} points, "
                 f"{sequence.length:.1f} m cruise")
    partial = build_feasible_tours(sequence, params, env)
    graph = build_collect_graph(partial, team.start, team.finish, params, env)
    choices = select_collect_points(graph)
    plan = finalize_team_plan(partial, choices, team)
    logging.info(f"Team {team.index} Step 2.3: {partial.tour_count} tours, "
                 f"mission time {mission_time(plan, params, env):.1f} s")
    return plan


class MissionPlanner:
    """Plans a scenario end to end.

    Teams are planned independently after the partition step, inline or in a
    process pool, and merged by team index.
    """

    def __init__(self, scenario: Scenario, jobs: int = 1):
        self.scenario = scenario
        self.jobs = max(1, int(jobs))
        self.planning_time: Optional[float] = None

    def plan(self) -> MissionPlan:
        """Run the planner.

        Returns:
            MissionPlan with one TeamPlan per team

        Raises:
            InfeasibleInstance: a point cannot be served within the flight limit
        """
        scenario = self.scenario
        started = time.perf_counter()
        logging.info(f"Planning {scenario.n} points for {scenario.m} teams "
                     f"(delta_a={scenario.params.delta_a}, delta_g={scenario.params.delta_g})")

        partition = assign_points(scenario.teams, scenario.points, scenario.environment)
        jobs = [(team, partition.points_for(pos)) for pos, team in enumerate(scenario.teams)]

        if self.jobs > 1 and scenario.m > 1:
            with ProcessPoolExecutor(max_workers=min(self.jobs, scenario.m)) as pool:
                futures = [
                    pool.submit(plan_team, team, points, scenario.params, scenario.environment)
                    for team, points in jobs
                ]
                plans = [future.result() for future in futures]
        else:
            plans = [plan_team(team, points, scenario.params, scenario.environment) for team, points in jobs]

        mission = MissionPlan(tuple(sorted(plans, key=lambda p: p.team.index)))
        self.planning_time = time.perf_counter() - started
        logging.info(f"Planning finished in {self.planning_time:.3f} s, objective "
                     f"{objective(mission, scenario.params, scenario.environment):.1f} s")
        return mission


def plan_mission(scenario: Scenario, jobs: int = 1) -> MissionPlan:
    return MissionPlanner(scenario, jobs).plan()


def mission_time(plan: TeamPlan, params: VehicleParams, env: Environment, slowdown: float = 1.0) -> float:
    """Total execution time of one team plan.

    Start leg, then per tour max(flight, UGV transfer) followed by
    max(UGV leg to the next release or the finish, recharge). Trivial rows add nothing.
    """
    team = plan.team
    tours = [row for _, row in plan.tours()]
    if not tours:
        return ugv_time(params, env, team.start, team.finish)
    total = ugv_time(params, env, team.start, tours[0].release)
    for position, row in enumerate(tours):
        total += max(row_times(params, env, row, slowdown))
        following = tours[position + 1].release if position + 1 < len(tours) else team.finish
        total += max(ugv_time(params, env, row.collect, following), recharge_time(params, env, row, slowdown))
    return total


def objective(mission: MissionPlan, params: VehicleParams, env: Environment) -> float:
    """Largest team mission time."""
    return max((mission_time(plan, params, env) for plan in mission.team_plans), default=0.0)


def mission_lower_bound(scenario: Scenario) -> float:
    """Simple bound no plan can beat: anchor-to-anchor driving and climbing to every point."""
    params, env = scenario.params, scenario.environment
    drive = max(ugv_time(params, env, t.start, t.finish) for t in scenario.teams)
    climb = max((2.0 * p.z / params.v_v for p in scenario.points), default=0.0)
    return max(drive, climb)


def ugv_route(plan: TeamPlan) -> List[Point3]:
    """Ground stops of the UGV: start, release/collect of each tour, finish."""
    stops = [plan.team.start]
    for _, row in plan.tours():
        stops.extend([row.release, row.collect])
    stops.append(plan.team.finish)
    return stops


def team_summary(plan: TeamPlan, params: VehicleParams, env: Environment) -> Dict[str, Any]:
    """Tour count, total flight time, total UGV distance and mission time of one team."""
    stops = ugv_route(plan)
    return {
        "team": plan.team.index,
        "tours": len(plan.tours()),
        "flight_time": sum(tour_time(params, env, row) for _, row in plan.tours()),
        "ugv_distance": sum(env.ground_distance(a, b) for a, b in zip(stops, stops[1:])),
        "mission_time": mission_time(plan, params, env),
    }


def validate(mission: MissionPlan, scenario: Scenario) -> ValidationReport:
    """Check coverage, both energy constraints, ground feasibility and row structure.

    Times are recomputed from the geometry. Slacks are in seconds; a check passes
    when its slack is at least -EPSILON.
    """
    params, env = scenario.params, scenario.environment
    report = ValidationReport()
    targets = set(scenario.points)

    planned = sorted(p.team.index for p in mission.team_plans)
    expected = [t.index for t in scenario.teams]
    report.add(ConstraintCheck(
        Constraint.ROW_STRUCTURE, planned == expected,
        message=f"plans for teams {planned}, scenario teams {expected}",
    ))

    visited = set()
    for plan in mission.team_plans:
        mu = plan.team.index
        if mu in expected:
            team = scenario.teams[expected.index(mu)]
            report.add(ConstraintCheck(
                Constraint.ROW_STRUCTURE, plan.team == team, team=mu,
                message="" if plan.team == team else f"anchors differ from scenario team {mu}",
            ))
        width = len(plan.rows) + 2
        for i, row in enumerate(plan.rows, start=1):
            visited.update(row.visits)
            stray = [v for v in row.visits if v not in targets]
            structure_ok = not stray and (not row.is_trivial or row.release == row.collect)
            report.add(ConstraintCheck(
                Constraint.ROW_STRUCTURE, structure_ok, team=mu, row=i,
                message=(f"visits outside the monitoring set: {[v.as_tuple() for v in stray]}" if stray
                         else "" if structure_ok else "trivial row moves from release to collect"),
            ))
            for column, point in ((1, row.release), (width, row.collect)):
                ok = point.z == 0.0 and env.is_feasible(point)
                report.add(ConstraintCheck(
                    Constraint.GROUND_FEASIBILITY, ok, team=mu, row=i, column=column,
                    message="" if ok else f"{point.as_tuple()} is not feasible ground",
                ))
            if row.is_trivial:
                continue
            try:
                tau_a, tau_g = row_times(params, env, row)
            except DisconnectedGround as e:
                report.add(ConstraintCheck(Constraint.GROUND_RENDEZVOUS, False, team=mu, row=i, message=str(e)))
                continue
            flight_slack = params.tau_a_max - params.delta_a - tau_a
            ground_slack = params.tau_a_max - params.delta_g - tau_g
            report.add(ConstraintCheck(
                Constraint.FLIGHT_ENERGY, flight_slack >= -EPSILON, team=mu, row=i, slack=flight_slack,
                message=f"tour time {tau_a:.3f} s",
            ))
            report.add(ConstraintCheck(
                Constraint.GROUND_RENDEZVOUS, ground_slack >= -EPSILON, team=mu, row=i, slack=ground_slack,
                message=f"UGV transfer {tau_g:.3f} s",
            ))

    for p in scenario.points:
        if p not in visited:
            report.add(ConstraintCheck(Constraint.COVERAGE, False, message=f"point {p.as_tuple()} is never visited"))
    report.add(ConstraintCheck(Constraint.COVERAGE, targets <= visited,
                               message=f"{len(targets & visited)}/{len(targets)} points visited"))

    level = logging.INFO if report.passed else logging.WARNING
    logging.log(level, f"Validation {report.summary()}")
    return report
