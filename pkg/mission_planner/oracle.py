"""
Exhaustive reference solvers for small instances.

These are test and benchmark oracles: exact within a finite candidate class of
release/collect points, and only usable at desk scale.
"""

import math
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .collect_select import FINISH, ORIGIN, LayeredGraph
from .exceptions import InfeasibleInstance, TooLarge
from .geometry import Environment
from .kinematics import recharge_time, row_times, ugv_time
from .models import MissionPlan, Point3, Scenario, TeamPlan, TourRow, VehicleParams, VisitSequence
from .tours import margins_hold

MAX_EXACT_POINTS = 5
MAX_PATH_POINTS = 9
MAX_COLLECT_COMBINATIONS = 10_000


@dataclass(frozen=True)
class CandidateClass:
    """Finite set of ground points release/collect points are chosen from."""
    points: Tuple[Point3, ...]
    description: str = ""

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "CandidateClass":
        """Ground projections of all monitoring points plus every team anchor."""
        env = scenario.environment
        found: List[Point3] = []
        for p in [*(env.project_to_ground(q) for q in scenario.points),
                  *(a for t in scenario.teams for a in (t.start, t.finish))]:
            if p not in found:
                found.append(p)
        return cls(tuple(found), "projections of monitoring points and team anchors")


class _TourTable:
    """Per visit-tuple cost tables over (release, collect) candidate pairs, memoized."""

    def __init__(self, candidates: Sequence[Point3], params: VehicleParams, env: Environment):
        self.candidates = list(candidates)
        self.params = params
        self.env = env
        self._tables: Dict[Tuple[Point3, ...], Tuple[np.ndarray, np.ndarray]] = {}

    def __call__(self, visits: Tuple[Point3, ...]) -> Tuple[np.ndarray, np.ndarray]:
        """(tour cost, recharge) arrays indexed [release, collect]; inadmissible pairs cost inf."""
        if visits not in self._tables:
            k = len(self.candidates)
            cost = np.full((k, k), np.inf)
            recharge = np.zeros((k, k))
            for a, release in enumerate(self.candidates):
                for b, collect in enumerate(self.candidates):
                    row = TourRow(release, visits, collect)
                    if margins_hold(self.params, self.env, row):
                        cost[a, b] = max(row_times(self.params, self.env, row))
                        recharge[a, b] = recharge_time(self.params, self.env, row)
            self._tables[visits] = (cost, recharge)
        return self._tables[visits]


def _chain(tours: Sequence[Tuple[Point3, ...]], table: _TourTable, start_leg: np.ndarray,
           transfer: np.ndarray, finish_leg: np.ndarray) -> Tuple[float, List[Tuple[int, int]]]:
    """Best (release, collect) index pair per tour for a fixed split, by dynamic programming."""
    k = len(start_leg)
    cost, recharge = table(tours[0])
    value = start_leg[:, None] + cost
    back: List[np.ndarray] = []
    for visits in tours[1:]:
        # arrive[r, c, r'] = value[r, c] + max(transfer c -> r', recharge[r, c])
        arrive = value[:, :, None] + np.maximum(transfer[None, :, :], recharge[:, :, None])
        flat = arrive.reshape(k * k, k)
        best_prev = np.argmin(flat, axis=0)
        reach = flat[best_prev, np.arange(k)]
        cost, next_recharge = table(visits)
        value = reach[:, None] + cost
        back.append(best_prev)
        recharge = next_recharge
    total = value + np.maximum(finish_leg[None, :], recharge)
    flat_index = int(np.argmin(total))
    best = float(total.reshape(-1)[flat_index])
    r, c = divmod(flat_index, k)
    pairs = [(r, c)]
    for best_prev in reversed(back):
        r, c = divmod(int(best_prev[r]), k)
        pairs.append((r, c))
    pairs.reverse()
    return best, pairs


def _splits(n: int):
    """All compositions of n into ordered positive parts."""
    for cuts in itertools.product((False, True), repeat=n - 1):
        sizes, current = [], 1
        for cut in cuts:
            if cut:
                sizes.append(current)
                current = 1
            else:
                current += 1
        sizes.append(current)
        yield sizes


def exact_plan(scenario: Scenario, candidates: Optional[CandidateClass] = None) -> Tuple[MissionPlan, float]:
    """Optimal single-team plan within the candidate class.

    Enumerates every visiting order, every split into consecutive tours and every
    release/collect assignment from the class.

    Raises:
        TooLarge: more than five points
        InfeasibleInstance: no admissible plan exists in the class
    """
    if scenario.m != 1:
        raise ValueError(f"The exact oracle handles one team, got m={scenario.m}")
    if scenario.n > MAX_EXACT_POINTS:
        raise TooLarge(f"Exact oracle is limited to {MAX_EXACT_POINTS} points, got {scenario.n}")
    params, env = scenario.params, scenario.environment
    team = scenario.teams[0]
    if scenario.n == 0:
        plan = TeamPlan(team, (TourRow.trivial(team.start),))
        return MissionPlan((plan,)), ugv_time(params, env, team.start, team.finish)

    candidates = candidates or CandidateClass.from_scenario(scenario)
    pts = list(candidates.points)
    table = _TourTable(pts, params, env)
    start_leg = np.array([ugv_time(params, env, team.start, c) for c in pts])
    finish_leg = np.array([ugv_time(params, env, c, team.finish) for c in pts])
    transfer = np.array([[ugv_time(params, env, a, b) for b in pts] for a in pts])

    best_value, best_tours, best_pairs = math.inf, None, None
    for order in itertools.permutations(scenario.points):
        for sizes in _splits(len(order)):
            tours, position = [], 0
            for size in sizes:
                tours.append(tuple(order[position:position + size]))
                position += size
            value, pairs = _chain(tours, table, start_leg, transfer, finish_leg)
            if value < best_value:
                best_value, best_tours, best_pairs = value, tours, pairs

    if not math.isfinite(best_value):
        raise InfeasibleInstance("No admissible plan within the candidate class")
    rows = [TourRow(pts[r], visits, pts[c]) for visits, (r, c) in zip(best_tours, best_pairs)]
    while len(rows) < scenario.n:
        rows.append(TourRow.trivial(rows[-1].release))
    logging.info(f"Exact oracle: n={scenario.n}, {len(pts)} candidates, objective {best_value:.1f} s")
    return MissionPlan((TeamPlan(team, tuple(rows)),)), best_value


def brute_force_path(points: Sequence[Point3], start_pt: Point3, end_pt: Point3) -> VisitSequence:
    """Shortest straight-line path through all points, starting at start_pt and ending at end_pt.

    Both endpoints must be members of ``points``.

    Raises:
        TooLarge: more than nine points
    """
    points = list(points)
    if len(points) > MAX_PATH_POINTS:
        raise TooLarge(f"Brute-force path is limited to {MAX_PATH_POINTS} points, got {len(points)}")
    if len(points) == 1:
        return VisitSequence(tuple(points))
    interior = list(points)
    interior.remove(start_pt)
    interior.remove(end_pt)
    best, best_length = None, math.inf
    for middle in itertools.permutations(interior):
        candidate = VisitSequence((start_pt, *middle, end_pt))
        if candidate.length < best_length:
            best, best_length = candidate, candidate.length
    return best


def enumerate_collect_choices(g: LayeredGraph) -> Tuple[float, List[Point3]]:
    """Exhaustive minimum over every combination of collect candidates.

    Raises:
        TooLarge: more than 10^4 combinations
    """
    layers = g.collect_layers()
    combinations = math.prod(len(layer) for layer in layers)
    if combinations > MAX_COLLECT_COMBINATIONS:
        raise TooLarge(f"{combinations} collect combinations exceed {MAX_COLLECT_COMBINATIONS}")
    best_value, best_path = math.inf, None
    for chosen in itertools.product(*layers):
        path = [ORIGIN]
        for row_index, node in zip(g.tour_rows, chosen):
            path.extend([("release", row_index), node])
        path.append(FINISH)
        value = g.path_weight(path)
        if value < best_value:
            best_value, best_path = value, path
    return best_value, g.choices_from_path(best_path)
