#!/usr/bin/env python3
"""
Tests for UAV/UGV travel times and the recharge model.
"""

import os
import sys
import math
import traceback

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mission_planner.geometry import Environment
from mission_planner.kinematics import recharge_time, row_times, tour_time, uav_leg_time, ugv_time
from mission_planner.models import BoxObstacle, Point3, TourRow, VehicleParams

PARAMS = VehicleParams()
ENV = Environment((4000.0, 4000.0, 500.0))
BLOCKED = Environment((4000.0, 4000.0, 500.0), [BoxObstacle(Point3(400, -100, 0), Point3(600, 100, 50))])


def test_uav_leg_time():
    assert math.isclose(uav_leg_time(PARAMS, Point3(0, 0, 0), Point3(0, 0, 100)), 50.0)
    assert math.isclose(uav_leg_time(PARAMS, Point3(0, 0, 100), Point3(300, 400, 100)), 50.0)
    assert math.isclose(uav_leg_time(PARAMS, Point3(0, 0, 100), Point3(300, 400, 160)), 50.0)
    assert math.isclose(uav_leg_time(PARAMS, Point3(0, 0, 100), Point3(30, 40, 160)), 30.0)


def test_tour_time_examples():
    hover = TourRow(Point3(500, 0, 0), (Point3(500, 0, 100),), Point3(500, 0, 0))
    assert math.isclose(tour_time(PARAMS, ENV, hover), 100.0)
    crossing = TourRow(Point3(0, 0, 0), (Point3(0, 0, 100), Point3(2000, 0, 100)), Point3(2000, 0, 0))
    assert math.isclose(tour_time(PARAMS, ENV, crossing), 300.0)
    assert tour_time(PARAMS, ENV, TourRow.trivial(Point3(10, 10, 0))) == 0.0


def test_tour_time_lower_bound_and_slowdown():
    row = TourRow(Point3(100, 100, 0), (Point3(700, 300, 100), Point3(900, 800, 140)), Point3(1200, 900, 0))
    assert tour_time(PARAMS, ENV, row) >= 2 * PARAMS.tau_tl
    assert math.isclose(tour_time(PARAMS, ENV, row, slowdown=1.25), 1.25 * tour_time(PARAMS, ENV, row))


def test_tour_time_reversal_symmetry():
    base = Point3(1000, 1000, 0)
    visits = (Point3(1200, 1000, 100), Point3(1500, 1400, 100), Point3(900, 1600, 100))
    forward = TourRow(base, visits, base)
    backward = TourRow(base, tuple(reversed(visits)), base)
    assert math.isclose(tour_time(PARAMS, ENV, forward), tour_time(PARAMS, ENV, backward))


def test_ugv_time():
    assert math.isclose(ugv_time(PARAMS, ENV, Point3(0, 0, 0), Point3(2000, 0, 0)), 800.0)
    assert ugv_time(PARAMS, ENV, Point3(5, 5, 0), Point3(5, 5, 0)) == 0.0
    around = ugv_time(PARAMS, BLOCKED, Point3(0, 0, 0), Point3(1000, 0, 0))
    assert abs(around - 409.85) < 0.01
    assert math.isclose(around, ugv_time(PARAMS, BLOCKED, Point3(1000, 0, 0), Point3(0, 0, 0)))


def test_recharge_time():
    hover = TourRow(Point3(500, 0, 0), (Point3(500, 0, 100),), Point3(500, 0, 0))
    assert math.isclose(recharge_time(PARAMS, ENV, hover), 100.0)
    assert recharge_time(PARAMS.replace(gamma=0.0), ENV, hover) == 0.0

    row = TourRow(Point3(0, 0, 0), (Point3(0, 0, 100), Point3(1000, 0, 100)), Point3(1000, 0, 0))
    tau_a, tau_g = row_times(PARAMS, BLOCKED, row)
    assert math.isclose(tau_a, 200.0)
    assert abs(tau_g - 409.85) < 0.01
    assert abs(recharge_time(PARAMS.replace(gamma=2.0), BLOCKED, row) - 819.70) < 0.01


def test_recharge_scales_with_gamma():
    row = TourRow(Point3(0, 0, 0), (Point3(300, 400, 100),), Point3(600, 0, 0))
    one = recharge_time(PARAMS, ENV, row)
    assert math.isclose(recharge_time(PARAMS.replace(gamma=3.0), ENV, row), 3.0 * one)


def test_battery_swap():
    params = PARAMS.replace(swap_time=30.0)
    row = TourRow(Point3(0, 0, 0), (Point3(300, 400, 100),), Point3(600, 0, 0))
    assert recharge_time(params, ENV, row) == 30.0
    assert recharge_time(params, ENV, TourRow.trivial(Point3(0, 0, 0))) == 0.0


def test_params_validation():
    for bad in ({"v_h": 0.0}, {"delta_a": -1.0}, {"v_h_avg": 12.0}, {"swap_time": -5.0}):
        try:
            VehicleParams(**bad)
        except ValueError:
            continue
        raise AssertionError(f"{bad} accepted")
    assert PARAMS.tau_tl == 50.0


def main():
    tests = [
        test_uav_leg_time,
        test_tour_time_examples,
        test_tour_time_lower_bound_and_slowdown,
        test_tour_time_reversal_symmetry,
        test_ugv_time,
        test_recharge_time,
        test_recharge_scales_with_gamma,
        test_battery_swap,
        test_params_validation,
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
