#!/usr/bin/env python3
"""
Tests for the exhaustive oracles used on tiny instances.
"""

import os
import sys
import math
import traceback

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mission_planner.exceptions import TooLarge
from mission_planner.geometry import Environment
from mission_planner.models import Point3, Scenario, Team, VehicleParams
from mission_planner.oracle import CandidateClass, brute_force_path, exact_plan
from mission_planner.planner import objective, plan_mission, validate
from mission_planner.simulator import generate_instance

ENV = Environment((4000.0, 4000.0, 500.0))
PARAMS = VehicleParams()
ORIGIN, CORNER = Point3(0, 0, 0), Point3(4000, 4000, 0)


def tiny_scenario(seed, n, params=PARAMS):
    return generate_instance(seed, n, 1, team_positions=[(ORIGIN, CORNER)], params=params, preset="table4")


def test_single_point_matches_the_planner():
    scenario = Scenario(ENV, PARAMS, (Team(1, ORIGIN, CORNER),), (Point3(2000, 2000, 100),))
    heuristic = objective(plan_mission(scenario), PARAMS, ENV)
    mission, value = exact_plan(scenario)
    assert math.isclose(value, heuristic)
    assert math.isclose(value, 2 * math.hypot(2000, 2000) / 2.5 + 100.0)
    (row,) = mission.team_plans[0].rows
    assert row.release == row.collect == Point3(2000, 2000, 0)


def test_oracle_never_loses_to_the_heuristic():
    for n in (2, 3, 4):
        for seed in range(3):
            scenario = tiny_scenario(100 * n + seed, n, PARAMS.replace(delta_a=60.0, delta_g=60.0))
            heuristic = objective(plan_mission(scenario), scenario.params, scenario.environment)
            mission, value = exact_plan(scenario)
            assert value <= heuristic + 1e-6
            assert math.isclose(value, objective(mission, scenario.params, scenario.environment),
                                rel_tol=1e-9, abs_tol=1e-6)
            report = validate(mission, scenario)
            assert report.passed, [c.to_dict() for c in report.failures]


def test_candidate_class():
    scenario = Scenario(ENV, PARAMS, (Team(1, ORIGIN, ORIGIN),), (Point3(10, 20, 100), Point3(10, 20, 150)))
    candidates = CandidateClass.from_scenario(scenario)
    assert candidates.points == (Point3(10, 20, 0), ORIGIN)


def test_size_limits():
    try:
        exact_plan(tiny_scenario(1, 6))
    except TooLarge:
        pass
    else:
        raise AssertionError("six points accepted")
    try:
        exact_plan(generate_instance(1, 3, 2))
    except ValueError:
        pass
    else:
        raise AssertionError("two teams accepted")
    points = [Point3(float(i), 0.0, 100.0) for i in range(10)]
    try:
        brute_force_path(points, points[0], points[-1])
    except TooLarge:
        return
    raise AssertionError("ten points accepted")


def test_brute_force_path():
    a, b = Point3(0, 0, 100), Point3(300, 400, 100)
    path = brute_force_path([b, a], a, b)
    assert path.points == (a, b)
    assert math.isclose(path.length, 500.0)

    line = [Point3(x, 0, 100) for x in (700, 100, 400, 0, 900)]
    path = brute_force_path(line, Point3(0, 0, 100), Point3(900, 0, 100))
    assert [p.x for p in path.points] == [0, 100, 400, 700, 900]
    assert math.isclose(path.length, 900.0)


def test_brute_force_path_is_optimal_among_samples():
    rng = np.random.default_rng(4)
    points = [Point3(float(x), float(y), 100.0) for x, y in rng.uniform(0, 4000, size=(7, 2))]
    best = brute_force_path(points, points[0], points[1])
    for _ in range(200):
        middle = list(rng.permutation(len(points) - 2) + 2)
        order = [points[0], *(points[k] for k in middle), points[1]]
        length = sum(p.distance(q) for p, q in zip(order, order[1:]))
        assert best.length <= length + 1e-9


def main():
    tests = [
        test_single_point_matches_the_planner,
        test_oracle_never_loses_to_the_heuristic,
        test_candidate_class,
        test_size_limits,
        test_brute_force_path,
        test_brute_force_path_is_optimal_among_samples,
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
