#!/usr/bin/env python3
"""
Tests for greedy packing of a visit sequence into energy-feasible tours.
"""

import os
import sys
import traceback

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from mission_planner.exceptions import InfeasibleInstance
from mission_planner.geometry import Environment
from mission_planner.models import Point3, TourRow, VehicleParams, VisitSequence
from mission_planner.sequencing import plan_visit_sequence
from mission_planner.tours import build_feasible_tours, collect_candidates, margins_hold

ENV = Environment((4000.0, 4000.0, 500.0))
PARAMS = VehicleParams()
P1, P2 = Point3(0, 0, 100), Point3(2000, 0, 100)


def random_sequence(seed, n=20):
    rng = np.random.default_rng(seed)
    points = [Point3(float(x), float(y), 100.0) for x, y in rng.uniform(0, 4000, size=(n, 2))]
    return plan_visit_sequence(points, Point3(0, 0, 0), Point3(1900, 1900, 0), ENV)


def test_single_point_tour():
    partial = build_feasible_tours(VisitSequence((P1,)), PARAMS, ENV)
    assert partial.rows == (TourRow(Point3(0, 0, 0), (P1,), Point3(0, 0, 0)),)
    assert partial.candidate_sets == ((Point3(0, 0, 0),),)


def test_two_points_share_a_tour():
    partial = build_feasible_tours(VisitSequence((P1, P2)), PARAMS, ENV)
    assert partial.rows[0].visits == (P1, P2)
    assert partial.candidate_sets[0] == (Point3(0, 0, 0),)
    assert partial.rows[1].is_trivial
    assert partial.rows[1].release == Point3(0, 0, 0)
    assert partial.tour_count == 1


def test_margin_splits_the_tour():
    partial = build_feasible_tours(VisitSequence((P1, P2)), PARAMS.replace(delta_a=150.0), ENV)
    assert partial.tour_count == 2
    assert partial.rows[0].visits == (P1,)
    assert partial.rows[1].visits == (P2,)
    assert partial.rows[1].release == Point3(2000, 0, 0)
    assert partial.candidate_sets[1] == (Point3(2000, 0, 0),)


def test_unreachable_point_is_infeasible():
    try:
        build_feasible_tours(VisitSequence((P1,)), PARAMS.replace(tau_a_max=80.0), ENV)
    except InfeasibleInstance as e:
        assert e.point == P1
        return
    raise AssertionError("a 100 s tour was accepted under an 80 s limit")


def test_candidates_satisfy_both_constraints():
    for delta in (0.0, 60.0):
        params = PARAMS.replace(delta_a=delta, delta_g=delta)
        partial = build_feasible_tours(random_sequence(5), params, ENV)
        for row, candidates in zip(partial.rows, partial.candidate_sets):
            if row.is_trivial:
                assert candidates == ()
                continue
            assert candidates
            for c in candidates:
                assert margins_hold(params, ENV, row.with_collect(c))


def test_coverage_and_row_count():
    seq = random_sequence(9, n=30)
    partial = build_feasible_tours(seq, PARAMS, ENV)
    assert len(partial.rows) == len(seq)
    visits = [v for row in partial.rows for v in row.visits]
    assert visits == list(seq.points)


def test_rows_are_maximal():
    seq = random_sequence(13, n=25)
    partial = build_feasible_tours(seq, PARAMS, ENV)
    projections = {p: ENV.project_to_ground(p) for p in seq}
    k = 0
    for row in partial.rows:
        if row.is_trivial:
            continue
        k += len(row.visits)
        if k < len(seq):
            extended = list(row.visits) + [seq.points[k]]
            assert collect_candidates(PARAMS, ENV, row.release, extended, projections) == []


def test_trivial_rows_trail_the_tours():
    for seed in range(5):
        partial = build_feasible_tours(random_sequence(200 + seed), PARAMS.replace(delta_a=150.0), ENV)
        kinds = [row.is_trivial for row in partial.rows]
        assert kinds == sorted(kinds)
        last = partial.rows[partial.tour_count - 1]
        for row in partial.rows[partial.tour_count:]:
            assert row.release == row.collect == last.release


def test_wide_margin_never_needs_fewer_tours():
    for seed in range(5):
        seq = random_sequence(300 + seed, n=30)
        loose = build_feasible_tours(seq, PARAMS, ENV).tour_count
        tight = build_feasible_tours(seq, PARAMS.replace(delta_a=150.0), ENV).tour_count
        assert tight >= loose


def main():
    tests = [
        test_single_point_tour,
        test_two_points_share_a_tour,
        test_margin_splits_the_tour,
        test_unreachable_point_is_infeasible,
        test_candidates_satisfy_both_constraints,
        test_coverage_and_row_count,
        test_rows_are_maximal,
        test_trivial_rows_trail_the_tours,
        test_wide_margin_never_needs_fewer_tours,
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
