"""
Tour robustness values, admissibility of modified plans and the release/collect
adjustment budgets derived from them.
"""

import logging
from typing import Optional

from .exceptions import DisconnectedGround, StructureMismatch
from .geometry import Environment
from .kinematics import row_times, tour_time, ugv_time
from .models import (
    AdjustmentBudget, Constraint, ConstraintCheck, MissionPlan, TeamPlan, TourRobustness, TourRow,
    ValidationReport, VehicleParams,
)
from .tours import EPSILON


def tour_robustness(plan: TeamPlan, i: int, params: VehicleParams, env: Environment) -> TourRobustness:
    """Largest increases of the row's UAV and UGV times that keep it within the flight limit.

    Args:
        plan: Team plan
        i: Row index (0-based)
        params: Vehicle parameters
        env: Environment the plan was made for
    """
    tau_a, tau_g = row_times(params, env, plan.rows[i])
    return TourRobustness(params.tau_a_max - tau_a, params.tau_a_max - tau_g)


def adjustment_budget(plan: TeamPlan, i: int, params: VehicleParams, env: Environment) -> AdjustmentBudget:
    """Distances the row's release/collect may move, using the sustained speeds."""
    robustness = tour_robustness(plan, i, params, env)
    row = plan.rows[i]
    return AdjustmentBudget(
        combined_deviation_radius=params.sustained_h_speed * robustness.delta_hat_a,
        ground_slack=params.sustained_g_speed * robustness.delta_hat_g,
        planned_ground_length=env.ground_distance(row.release, row.collect),
    )


def corollary_check(original_row: TourRow, modified_row: TourRow, actual_env: Environment,
                    budget: AdjustmentBudget) -> bool:
    """Sufficient condition for a modified tour to stay energy-feasible.

    True iff the release and collect shifts together fit in the deviation radius and
    the actual ground path between them is at most the planned one plus the slack.
    """
    deviation = (original_row.release.distance(modified_row.release)
                 + original_row.collect.distance(modified_row.collect))
    if deviation > budget.combined_deviation_radius + EPSILON:
        return False
    planned = budget.planned_ground_length
    if planned is None:
        planned = actual_env.ground_distance(original_row.release, original_row.collect)
    if modified_row.release.horizontal_distance(modified_row.collect) > planned + budget.ground_slack + EPSILON:
        return False
    try:
        actual = actual_env.ground_distance(modified_row.release, modified_row.collect)
    except DisconnectedGround:
        return False
    return actual <= planned + budget.ground_slack + EPSILON


def check_structure(original: MissionPlan, modified: MissionPlan):
    """Raise StructureMismatch unless both plans have the same teams, rows and visits."""
    if len(original.team_plans) != len(modified.team_plans):
        raise StructureMismatch(f"{len(original.team_plans)} vs {len(modified.team_plans)} team plans")
    for before, after in zip(original.team_plans, modified.team_plans):
        if before.team.index != after.team.index or len(before.rows) != len(after.rows):
            raise StructureMismatch(f"Team {before.team.index}: row structure differs")
        for i, (a, b) in enumerate(zip(before.rows, after.rows), start=1):
            if a.visits != b.visits:
                raise StructureMismatch(f"Team {before.team.index} row {i}: visits differ")


def check_modified_plan(original: MissionPlan, modified: MissionPlan, actual_env: Environment,
                        params: VehicleParams, planned_env: Environment,
                        slowdown: float = 1.0) -> ValidationReport:
    """Check a plan that differs from the original only in release/collect points.

    Each non-trivial tour must satisfy actual UAV time <= planned time + slack and
    actual UGV time <= planned time + slack, with endpoints on feasible actual ground.

    Raises:
        StructureMismatch: the visits or rows differ
    """
    check_structure(original, modified)
    report = ValidationReport()
    for before, after in zip(original.team_plans, modified.team_plans):
        mu = before.team.index
        for i, (row, new_row) in enumerate(zip(before.rows, after.rows)):
            if row.is_trivial:
                continue
            robustness = tour_robustness(before, i, params, planned_env)
            tau_a, tau_g = row_times(params, planned_env, row)
            for column, point in ((1, new_row.release), (len(after.rows) + 2, new_row.collect)):
                ok = point.z == 0.0 and actual_env.is_feasible(point)
                report.add(ConstraintCheck(Constraint.GROUND_FEASIBILITY, ok, team=mu, row=i + 1, column=column,
                                           message="" if ok else f"{point.as_tuple()} blocked in actual world"))

            actual_a = tour_time(params, actual_env, new_row, slowdown)
            flight_slack = tau_a + robustness.delta_hat_a - actual_a
            report.add(ConstraintCheck(Constraint.FLIGHT_ENERGY, flight_slack >= -EPSILON, team=mu, row=i + 1,
                                       slack=flight_slack, message=f"actual tour time {actual_a:.3f} s"))
            try:
                actual_g: Optional[float] = ugv_time(params, actual_env, new_row.release, new_row.collect)
            except DisconnectedGround:
                actual_g = None
            if actual_g is None:
                report.add(ConstraintCheck(Constraint.GROUND_RENDEZVOUS, False, team=mu, row=i + 1,
                                           message="no actual ground path"))
                continue
            ground_slack = tau_g + robustness.delta_hat_g - actual_g
            report.add(ConstraintCheck(Constraint.GROUND_RENDEZVOUS, ground_slack >= -EPSILON, team=mu,
                                       row=i + 1, slack=ground_slack,
                                       message=f"actual UGV transfer {actual_g:.3f} s"))
    logging.debug(f"Modified plan check: {report.summary()}")
    return report
