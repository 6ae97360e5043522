#!/usr/bin/env python3
"""
Tests for tour robustness values, adjustment budgets and modified-plan checks.
"""

import os
import sys
import math
import traceback

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mission_planner.exceptions import StructureMismatch
from mission_planner.geometry import Environment
from mission_planner.models import (
    AdjustmentBudget, BoxObstacle, Constraint, MissionPlan, Point3, Team, TeamPlan, TourRow, VehicleParams,
)
from mission_planner.planner import plan_mission
from mission_planner.robustness import adjustment_budget, check_modified_plan, corollary_check, tour_robustness
from mission_planner.simulator import generate_instance

ENV = Environment((4000.0, 4000.0, 500.0))
PARAMS = VehicleParams()
ORIGIN = Point3(0, 0, 0)
ROUND_TRIP = TourRow(ORIGIN, (Point3(0, 0, 100), Point3(2000, 0, 100)), ORIGIN)


def mission_with(row):
    team = Team(1, ORIGIN, ORIGIN)
    return MissionPlan((TeamPlan(team, (row, TourRow.trivial(ORIGIN))),))


def test_tour_robustness_values():
    plan = mission_with(ROUND_TRIP).team_plans[0]
    robustness = tour_robustness(plan, 0, PARAMS, ENV)
    assert math.isclose(robustness.delta_hat_a, 100.0)
    assert math.isclose(robustness.delta_hat_g, 600.0)
    trivial = tour_robustness(plan, 1, PARAMS, ENV)
    assert (trivial.delta_hat_a, trivial.delta_hat_g) == (600.0, 600.0)


def test_adjustment_budget():
    plan = mission_with(ROUND_TRIP).team_plans[0]
    budget = adjustment_budget(plan, 0, PARAMS, ENV)
    assert math.isclose(budget.combined_deviation_radius, 1000.0)
    assert math.isclose(budget.ground_slack, 1500.0)
    assert budget.planned_ground_length == 0.0


def test_corollary_check():
    budget = AdjustmentBudget(1000.0, 1500.0, 0.0)
    inside = ROUND_TRIP.with_endpoints(Point3(300, 0, 0), Point3(0, 400, 0))
    assert corollary_check(ROUND_TRIP, inside, ENV, budget)
    outside = ROUND_TRIP.with_endpoints(Point3(700, 0, 0), Point3(0, 400, 0))
    assert not corollary_check(ROUND_TRIP, outside, ENV, budget)
    too_long = ROUND_TRIP.with_endpoints(ORIGIN, Point3(1000, 0, 0))
    assert not corollary_check(ROUND_TRIP, too_long, ENV, AdjustmentBudget(1000.0, 300.0, 0.0))


def test_corollary_uses_the_actual_ground():
    original = TourRow(ORIGIN, (Point3(500, 0, 100),), Point3(1000, 0, 0))
    budget = AdjustmentBudget(1000.0, 10.0, 1000.0)
    assert corollary_check(original, original, ENV, budget)
    walled = ENV.with_obstacles([BoxObstacle(Point3(400, -100, 0), Point3(600, 100, 50))])
    assert not corollary_check(original, original, walled, budget)


def test_identity_passes():
    mission = mission_with(ROUND_TRIP)
    report = check_modified_plan(mission, mission, ENV, PARAMS, ENV)
    assert report.passed, [c.to_dict() for c in report.failures]


def test_far_collect_fails():
    mission = mission_with(ROUND_TRIP)
    moved = mission_with(ROUND_TRIP.with_collect(Point3(3000, 0, 0)))
    report = check_modified_plan(mission, moved, ENV, PARAMS, ENV)
    assert not report.passed
    assert report.failures_of(Constraint.GROUND_RENDEZVOUS)
    assert not report.failures_of(Constraint.FLIGHT_ENERGY)


def test_blocked_endpoint_fails():
    mission = mission_with(ROUND_TRIP)
    actual = ENV.with_obstacles([BoxObstacle(Point3(-25, -25, 0), Point3(25, 25, 50))])
    report = check_modified_plan(mission, mission, actual, PARAMS, ENV)
    assert report.failures_of(Constraint.GROUND_FEASIBILITY)


def test_changed_visits_rejected():
    mission = mission_with(ROUND_TRIP)
    changed = mission_with(TourRow(ORIGIN, (Point3(0, 0, 100),), ORIGIN))
    try:
        check_modified_plan(mission, changed, ENV, PARAMS, ENV)
    except StructureMismatch:
        return
    raise AssertionError("different visits accepted")


def test_slowdown_exhausts_flight_slack():
    mission = mission_with(ROUND_TRIP)
    assert check_modified_plan(mission, mission, ENV, PARAMS, ENV, slowdown=1.2).passed
    report = check_modified_plan(mission, mission, ENV, PARAMS, ENV, slowdown=1.3)
    assert report.failures_of(Constraint.FLIGHT_ENERGY)


def test_margins_bound_the_robustness():
    params = PARAMS.replace(delta_a=60.0, delta_g=60.0)
    scenario = generate_instance(31, 40, 2, params=params)
    mission = plan_mission(scenario)
    for plan in mission.team_plans:
        for i, _ in plan.tours():
            robustness = tour_robustness(plan, i, params, scenario.environment)
            assert robustness.delta_hat_a >= 60.0 - 1e-6
            assert robustness.delta_hat_g >= 60.0 - 1e-6


def main():
    tests = [
        test_tour_robustness_values,
        test_adjustment_budget,
        test_corollary_check,
        test_corollary_uses_the_actual_ground,
        test_identity_passes,
        test_far_collect_fails,
        test_blocked_endpoint_fails,
        test_changed_visits_rejected,
        test_slowdown_exhausts_flight_slack,
        test_margins_bound_the_robustness,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✓ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"✗ {test.__name__}: {e}")
            traceback.print_exc()
    return failed == 0


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
