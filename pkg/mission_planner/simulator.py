"""
Random instance generation and Monte-Carlo execution of mission plans in worlds
that contain ground obstacles unknown at planning time.
"""

import math
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import AdjustmentExhausted, DisconnectedGround, GenerationFailed
from .geometry import Environment
from .kinematics import row_times
from .models import (
    AdjustmentBudget, BoxObstacle, ExecutionReport, MissionPlan, Point3, Scenario, Team, TeamPlan,
    TourExecution, TourRow, VehicleParams, ViolationKind,
)
from .planner import mission_time
from .robustness import adjustment_budget, corollary_check
from .tours import EPSILON

DEFAULT_BOUNDS = (4000.0, 4000.0, 500.0)

# Start/finish ground positions of up to ten teams on a 4000 m x 4000 m map.
DEFAULT_ANCHORS: Tuple[Tuple[Tuple[float, float], Tuple[float, float]], ...] = (
    ((0.0, 0.0), (1900.0, 1900.0)),
    ((4000.0, 0.0), (2100.0, 1900.0)),
    ((0.0, 4000.0), (1900.0, 2100.0)),
    ((4000.0, 4000.0), (2100.0, 2100.0)),
    ((2000.0, 0.0), (2000.0, 1800.0)),
    ((4000.0, 2000.0), (2200.0, 2000.0)),
    ((2000.0, 4000.0), (2000.0, 2200.0)),
    ((0.0, 2000.0), (1800.0, 2000.0)),
    ((1000.0, 0.0), (1850.0, 1950.0)),
    ((3000.0, 0.0), (2150.0, 1950.0)),
)
ANCHOR_REFERENCE = 4000.0

# Rings are spaced at a twentieth of the combined deviation budget, so the
# half-budget search radius of each endpoint holds ten rings.
RING_BEARINGS = 16
RING_STEPS = 10
MAX_CANDIDATES_PER_ENDPOINT = 64
SEARCH_POLICY = f"ring:{RING_BEARINGS}x{RING_STEPS},cap={MAX_CANDIDATES_PER_ENDPOINT},half-radius"


def default_teams(m: int, bounds: Sequence[float] = DEFAULT_BOUNDS) -> Tuple[Team, ...]:
    """Teams 1..m at the default anchors, scaled to the map size."""
    if not 1 <= m <= len(DEFAULT_ANCHORS):
        raise ValueError(f"Default anchors cover 1..{len(DEFAULT_ANCHORS)} teams, got m={m}")
    sx, sy = bounds[0] / ANCHOR_REFERENCE, bounds[1] / ANCHOR_REFERENCE
    return tuple(
        Team(mu, Point3(o[0] * sx, o[1] * sy, 0.0), Point3(f[0] * sx, f[1] * sy, 0.0))
        for mu, (o, f) in enumerate(DEFAULT_ANCHORS[:m], start=1)
    )


def generate_instance(seed: int, n: int, m: int, bounds: Sequence[float] = DEFAULT_BOUNDS,
                      team_positions: Optional[Sequence[Tuple[Point3, Point3]]] = None,
                      params: Optional[VehicleParams] = None,
                      obstacles: Iterable[BoxObstacle] = (), preset: str = "custom") -> Scenario:
    """Random scenario: n points uniform over the map at the minimum flight altitude.

    Args:
        seed: Random seed (same seed, same scenario)
        n: Number of monitoring points
        m: Number of teams
        bounds: Map extents (x, y, z)
        team_positions: (start, finish) per team; defaults to the standard anchors
        params: Vehicle parameters (defaults when omitted)
        obstacles: Known obstacles
        preset: Name recorded in the scenario

    Raises:
        ValueError: unless n >= m >= 1
    """
    if not n >= m >= 1:
        raise ValueError(f"Need n >= m >= 1, got n={n}, m={m}")
    params = params or VehicleParams()
    env = Environment(bounds, obstacles, params.z_min)
    if team_positions is None:
        teams = default_teams(m, bounds)
    else:
        if len(team_positions) != m:
            raise ValueError(f"{len(team_positions)} team positions for m={m}")
        teams = tuple(Team(mu, start, finish) for mu, (start, finish) in enumerate(team_positions, start=1))

    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, env.bounds[0], size=n)
    ys = rng.uniform(0.0, env.bounds[1], size=n)
    points = tuple(Point3(float(x), float(y), params.z_min) for x, y in zip(xs, ys))
    logging.debug(f"Generated instance seed={seed} n={n} m={m}")
    return Scenario(env, params, teams, points, seed=seed, preset=preset)


@dataclass
class TrueWorld:
    """Planning environment plus the obstacles only discovered during execution."""
    base: Environment
    unknown_obstacles: Tuple[BoxObstacle, ...] = ()
    actual: Environment = field(init=False)

    def __post_init__(self):
        self.unknown_obstacles = tuple(self.unknown_obstacles)
        self.actual = self.base.with_obstacles(self.unknown_obstacles) if self.unknown_obstacles else self.base

    def to_dict(self):
        return {"base": self.base.to_dict(), "unknown_obstacles": [o.to_dict() for o in self.unknown_obstacles]}


def inject_unknown_obstacles(env: Environment, seed: int, count: int, max_size: float = 50.0,
                             protected: Sequence[Point3] = (), hotspots: Sequence[Point3] = (),
                             max_attempts: Optional[int] = None) -> TrueWorld:
    """Add random ground boxes that the planner did not know about.

    Boxes are rejected if their footprint contains the ground projection of a
    protected point (monitoring points, team anchors) or if they disconnect the
    ground. Heights stay at or below the minimum flight altitude. With hotspots, each box is centred near a randomly chosen hotspot
    (for example planned release/collect points); otherwise anywhere on the map.

    Raises:
        GenerationFailed: the rejection attempts ran out
    """
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    if count == 0:
        return TrueWorld(env)

    rng = np.random.default_rng(seed)
    x_max, y_max, _ = env.bounds
    limit = max_attempts or 50 * count
    keep_clear = [p.ground() for p in protected]
    accepted: List[BoxObstacle] = []
    attempts = 0
    while len(accepted) < count:
        if attempts >= limit:
            raise GenerationFailed(f"Placed {len(accepted)}/{count} obstacles in {attempts} attempts")
        attempts += 1
        width, depth = rng.uniform(max_size / 2.0, max_size, size=2)
        height = rng.uniform(0.2, 1.0) * env.min_flight_altitude
        if hotspots:
            centre = hotspots[int(rng.integers(len(hotspots)))]
            cx, cy = centre.x + rng.uniform(-0.4, 0.4) * width, centre.y + rng.uniform(-0.4, 0.4) * depth
        else:
            cx, cy = rng.uniform(0.0, x_max), rng.uniform(0.0, y_max)
        x0 = float(np.clip(cx - width / 2.0, 0.0, x_max - width))
        y0 = float(np.clip(cy - depth / 2.0, 0.0, y_max - depth))
        box = BoxObstacle(Point3(x0, y0, 0.0), Point3(x0 + width, y0 + depth, float(height)))
        if any(box.blocks(g) for g in keep_clear):
            continue
        try:
            env.with_obstacles([*accepted, box])
        except DisconnectedGround:
            continue
        accepted.append(box)
    logging.info(f"Injected {count} unknown obstacles in {attempts} attempts (seed {seed})")
    return TrueWorld(env, tuple(accepted))


def ring_candidates(env: Environment, p: Point3, radius: float) -> List[Point3]:
    """Feasible ground points around p, nearest ring first; p itself leads if feasible."""
    found = [p] if env.is_feasible(p) else []
    if radius <= 0:
        return found
    for step in range(1, RING_STEPS + 1):
        r = radius * step / RING_STEPS
        for bearing in range(RING_BEARINGS):
            angle = 2.0 * math.pi * bearing / RING_BEARINGS
            q = Point3(p.x + r * math.cos(angle), p.y + r * math.sin(angle), 0.0)
            if env.in_bounds(q) and env.is_feasible(q):
                found.append(q)
                if len(found) >= MAX_CANDIDATES_PER_ENDPOINT:
                    return found
    return found


def adjust_release_collect(row: TourRow, world: TrueWorld, budget: AdjustmentBudget) -> TourRow:
    """Move blocked release/collect points to feasible ground within half the deviation budget each.

    Pairs are tried by increasing total shift and must pass the corollary check.

    Raises:
        AdjustmentExhausted: no admissible pair within the budget
    """
    if row.is_trivial:
        return row
    actual = world.actual
    radius = budget.combined_deviation_radius / 2.0
    releases = ring_candidates(actual, row.release, radius)
    collects = ring_candidates(actual, row.collect, radius)
    pairs = sorted(
        ((r.distance(row.release) + c.distance(row.collect), a, b, r, c)
         for a, r in enumerate(releases) for b, c in enumerate(collects)),
        key=lambda item: item[:3],
    )
    for _, _, _, release, collect in pairs:
        modified = row.with_endpoints(release, collect)
        if corollary_check(row, modified, actual, budget):
            if modified != row:
                logging.debug(f"Adjusted release {row.release.as_tuple()} -> {release.as_tuple()}, "
                              f"collect {row.collect.as_tuple()} -> {collect.as_tuple()}")
            return modified
    raise AdjustmentExhausted(
        f"No admissible release/collect within {radius:.1f} m of {row.release.as_tuple()} / {row.collect.as_tuple()}"
    )


def _fallback_row(row: TourRow, actual: Environment) -> TourRow:
    """Nearest feasible endpoints regardless of budget (what a crew would do anyway)."""
    release = row.release if actual.is_feasible(row.release) else actual.project_to_ground(row.release)
    collect = row.collect if actual.is_feasible(row.collect) else actual.project_to_ground(row.collect)
    return row.with_endpoints(release, collect)


def execute(mission: MissionPlan, world: TrueWorld, params: VehicleParams, slowdown: float = 1.0,
            budget_scale: float = 1.0, points: Sequence[Point3] = (), seed: Optional[int] = None) -> ExecutionReport:
    """Walk every team plan in the true world.

    Blocked endpoints are adjusted within the tour's budget; when that fails the
    nearest feasible points are used and the tour is flagged. Realized flight and
    UGV transfer times above the flight limit are energy violations.

    Args:
        mission: Plan made for ``world.base``
        world: True world
        params: Vehicle parameters
        slowdown: Multiplier on realized UAV times
        budget_scale: Multiplier on adjustment budgets (0 forbids any adjustment)
        points: Monitoring points expected to be visited
        seed: Recorded in the report
    """
    planned_env, actual = world.base, world.actual
    executions: List[TourExecution] = []
    team_times = {}
    visited = set()
    for plan in mission.team_plans:
        mu = plan.team.index
        rows = list(plan.rows)
        for i, row in plan.tours():
            budget = adjustment_budget(plan, i, params, planned_env)
            budget = AdjustmentBudget(budget.combined_deviation_radius * budget_scale,
                                      budget.ground_slack * budget_scale, budget.planned_ground_length)
            planned_a, planned_g = row_times(params, planned_env, row)
            violations: List[ViolationKind] = []
            try:
                new_row = adjust_release_collect(row, world, budget)
            except AdjustmentExhausted as e:
                logging.warning(f"Team {mu} tour {i + 1}: {e}")
                violations.append(ViolationKind.ADJUSTMENT_EXHAUSTED)
                new_row = _fallback_row(row, actual)
            realized_a, realized_g = row_times(params, actual, new_row, slowdown)
            if realized_a > params.tau_a_max + EPSILON:
                violations.append(ViolationKind.FLIGHT_ENERGY)
            if realized_g > params.tau_a_max + EPSILON:
                violations.append(ViolationKind.GROUND_RENDEZVOUS)
            executions.append(TourExecution(
                team=mu, row=i + 1, planned_tau_a=planned_a, planned_tau_g=planned_g,
                realized_tau_a=realized_a, realized_tau_g=realized_g,
                original_release=row.release, original_collect=row.collect,
                release=new_row.release, collect=new_row.collect, violations=violations,
            ))
            rows[i] = new_row
            visited.update(row.visits)
        realized = TeamPlan(plan.team, tuple(rows))
        team_times[mu] = mission_time(realized, params, actual, slowdown)

    unvisited = [p for p in points if p not in visited]
    report = ExecutionReport(seed, team_times, executions, unvisited, search_policy=SEARCH_POLICY)
    logging.info(f"Execution seed={seed}: {len(executions)} tours, "
                 f"{sum(1 for t in executions if t.adjusted)} adjusted, "
                 f"{report.energy_violations} energy violations")
    return report


def trial_world(scenario: Scenario, mission: MissionPlan, seed: int, obstacle_count: int,
                max_size: float = 50.0, block_stops: bool = True) -> TrueWorld:
    """Unknown obstacles for one trial of a plan.

    Team anchors and the ground below every monitoring point stay reachable. With
    ``block_stops`` the planned release/collect stops are the exception: boxes are
    centred near them so the adjustment policy has something to do. Without it
    every projection is kept clear and boxes land anywhere on the map.
    """
    anchors = {a for t in scenario.teams for a in (t.start, t.finish)}
    stops = set()
    if block_stops:
        stops = {p for plan in mission.team_plans for _, row in plan.tours()
                 for p in (row.release, row.collect)} - anchors
    protected = [*anchors, *(p for p in scenario.points if p.ground() not in stops)]
    hotspots = sorted(stops, key=Point3.as_tuple)
    return inject_unknown_obstacles(scenario.environment, seed, obstacle_count, max_size,
                                    protected=protected, hotspots=hotspots)


def run_trial(scenario: Scenario, mission: MissionPlan, seed: int, obstacle_count: int,
              max_size: float = 50.0, slowdown: float = 1.0, budget_scale: float = 1.0,
              block_stops: bool = True) -> ExecutionReport:
    """Execute the plan once in the world of :func:`trial_world`."""
    world = trial_world(scenario, mission, seed, obstacle_count, max_size, block_stops)
    return execute(mission, world, scenario.params, slowdown=slowdown, budget_scale=budget_scale,
                   points=scenario.points, seed=seed)


def realized_mission(mission: MissionPlan, report: ExecutionReport) -> MissionPlan:
    """The plan with the release/collect points actually used in an execution."""
    moved = {(t.team, t.row): (t.release, t.collect) for t in report.tours}
    plans = []
    for plan in mission.team_plans:
        rows = tuple(
            row.with_endpoints(*moved[(plan.team.index, i + 1)]) if (plan.team.index, i + 1) in moved else row
            for i, row in enumerate(plan.rows)
        )
        plans.append(TeamPlan(plan.team, rows))
    return MissionPlan(tuple(plans))


def run_monte_carlo(scenario: Scenario, mission: MissionPlan, seeds: Sequence[int], obstacle_count: int,
                    max_size: float = 50.0, slowdown: float = 1.0, budget_scale: float = 1.0,
                    jobs: int = 1, block_stops: bool = True) -> List[ExecutionReport]:
    """Independent trials, one per seed, returned in seed order."""
    args = [(scenario, mission, seed, obstacle_count, max_size, slowdown, budget_scale, block_stops)
            for seed in seeds]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_trial, *zip(*args)))
    else:
        reports = [run_trial(*a) for a in args]
    failed = sum(1 for r in reports if not r.success)
    logging.info(f"Monte-Carlo: {len(reports)} trials, {failed} with violations")
    return sorted(reports, key=lambda r: r.seed)
