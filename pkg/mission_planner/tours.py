"""
Greedy packing of a visit sequence into maximal energy-feasible tours.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .exceptions import InfeasibleInstance
from .geometry import Environment
from .kinematics import tour_time, ugv_time
from .models import Point3, TourRow, VehicleParams, VisitSequence

# Tolerance on every time comparison (seconds).
EPSILON = 1e-6


@dataclass(frozen=True)
class PartialTeamPlan:
    """Tours before collect selection: collect points still equal the release points."""
    rows: Tuple[TourRow, ...]
    candidate_sets: Tuple[Tuple[Point3, ...], ...]
    default_infeasible: Tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "candidate_sets", tuple(tuple(c) for c in self.candidate_sets))
        if not self.default_infeasible:
            object.__setattr__(self, "default_infeasible", tuple(False for _ in self.rows))

    @property
    def tour_count(self) -> int:
        return sum(1 for row in self.rows if not row.is_trivial)

    def to_dict(self):
        return {
            "rows": [row.to_dict() for row in self.rows],
            "candidate_sets": [[c.to_list() for c in cs] for cs in self.candidate_sets],
            "default_infeasible": list(self.default_infeasible),
        }


def margins_hold(params: VehicleParams, env: Environment, row: TourRow) -> bool:
    """Both energy constraints with the robustness margins delta_a and delta_g."""
    limit = params.tau_a_max + EPSILON
    if tour_time(params, env, row) + params.delta_a > limit:
        return False
    return ugv_time(params, env, row.release, row.collect) + params.delta_g <= limit


def collect_candidates(params: VehicleParams, env: Environment, release: Point3,
                       visits: Sequence[Point3], projections: Dict[Point3, Point3]) -> List[Point3]:
    """Admissible collect points among the ground projections of the row's visits.

    Args:
        params: Vehicle parameters
        env: Planning environment
        release: Release point of the row
        visits: Visits of the row, in order
        projections: Ground projection of every monitoring point

    Returns:
        Deduplicated candidates in visit order
    """
    unique: List[Point3] = []
    for visit in visits:
        foot = projections[visit]
        if foot not in unique:
            unique.append(foot)
    return [c for c in unique if margins_hold(params, env, TourRow(release, tuple(visits), c))]


def check_singletons(points: Sequence[Point3], projections: Dict[Point3, Point3],
                     params: VehicleParams, env: Environment):
    """Raise InfeasibleInstance if any point cannot be served by a tour of its own."""
    for p in points:
        foot = projections[p]
        if not margins_hold(params, env, TourRow(foot, (p,), foot)):
            raise InfeasibleInstance(
                f"Point {p.as_tuple()} needs {tour_time(params, env, TourRow(foot, (p,), foot)):.1f} s "
                f"of flight from {foot.as_tuple()}, limit {params.tau_a_max} s with margin {params.delta_a} s",
                point=p,
            )


def build_feasible_tours(seq: VisitSequence, params: VehicleParams, env: Environment) -> PartialTeamPlan:
    """Split the sequence into rows, each extended until no collect point remains admissible.

    Rows after the last point are trivial and repeat the previous release.

    Raises:
        InfeasibleInstance: a point cannot be served even by a singleton tour
    """
    points = list(seq)
    n = len(points)
    projections = {p: env.project_to_ground(p) for p in points}
    check_singletons(points, projections, params, env)

    rows: List[TourRow] = []
    candidate_sets: List[Tuple[Point3, ...]] = []
    flags: List[bool] = []
    k = 0
    for i in range(n):
        if k == n:
            rows.append(TourRow.trivial(rows[-1].release))
            candidate_sets.append(())
            flags.append(False)
            continue

        release = projections[points[k]]
        visits: List[Point3] = []
        accepted: Tuple[Point3, ...] = ()
        while k < n:
            trial = visits + [points[k]]
            candidates = collect_candidates(params, env, release, trial, projections)
            if not candidates:
                break
            visits, accepted = trial, tuple(candidates)
            k += 1

        default_infeasible = release not in accepted
        if default_infeasible:
            logging.warning(f"Row {i + 1}: returning to the release point is not admissible, "
                            f"{len(accepted)} other collect candidates")
        logging.debug(f"Row {i + 1}: {len(visits)} visits from {release.as_tuple()}, "
                      f"{len(accepted)} collect candidates")
        rows.append(TourRow(release, tuple(visits), release))
        candidate_sets.append(accepted)
        flags.append(default_infeasible)

    partial = PartialTeamPlan(tuple(rows), tuple(candidate_sets), tuple(flags))
    logging.info(f"Step 2.2: {n} points packed into {partial.tour_count} tours")
    return partial
