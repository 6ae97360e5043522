"""
Assignment of monitoring points to teams by nearest start/finish anchor.
"""

import logging
from typing import List, Sequence

from .geometry import Environment
from .models import Partition, Point3, Team

TIE_TOLERANCE = 1e-9


def anchor_distance(env: Environment, p: Point3, anchor: Point3) -> float:
    """Distance used for clustering.

    Straight line when no known obstacle is in the way, otherwise the drop to the
    ground projection plus the ground path to the anchor (an upper bound).
    """
    if not env.segment_blocked(p, anchor):
        return p.distance(anchor)
    foot = env.project_to_ground(p)
    return p.distance(foot) + env.ground_distance(foot, anchor)


def nearest_team(teams: Sequence[Team], p: Point3, env: Environment) -> int:
    """Position (0-based) of the team whose start or finish is closest to p; ties go to the lower index."""
    best_position, best_distance = 0, float("inf")
    for position, team in enumerate(teams):
        distance = min(anchor_distance(env, p, team.start), anchor_distance(env, p, team.finish))
        if distance < best_distance - TIE_TOLERANCE:
            best_position, best_distance = position, distance
    return best_position


def assign_points(teams: Sequence[Team], points: Sequence[Point3], env: Environment) -> Partition:
    """Split the monitoring points among the teams.

    Args:
        teams: Teams in index order (m >= 1)
        points: Monitoring points
        env: Planning environment

    Returns:
        Partition with one group per team, points kept in input order
    """
    if not teams:
        raise ValueError("At least one team is required")
    groups: List[List[Point3]] = [[] for _ in teams]
    for p in points:
        groups[nearest_team(teams, p, env)].append(p)
    logging.info(f"Step 1: assigned {len(points)} points, team sizes {[len(g) for g in groups]}")
    return Partition(tuple(tuple(g) for g in groups))
