"""
Data models for the UAV-UGV mission planner.
"""

import math
from enum import Enum
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple, TYPE_CHECKING

if TYPE_CHECKING:
    from .geometry import Environment


class Constraint(Enum):
    """Enumeration of the mission constraints checked by validation."""
    COVERAGE = "coverage"
    FLIGHT_ENERGY = "flight_energy"
    GROUND_RENDEZVOUS = "ground_rendezvous"
    GROUND_FEASIBILITY = "ground_feasibility"
    ROW_STRUCTURE = "row_structure"


class ViolationKind(Enum):
    """Enumeration of the failures an execution can report."""
    FLIGHT_ENERGY = "flight_energy"
    GROUND_RENDEZVOUS = "ground_rendezvous"
    ADJUSTMENT_EXHAUSTED = "adjustment_exhausted"


@dataclass(frozen=True)
class Point3:
    """Represents a point of the world in meters."""
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Point coordinate {name}={value} is not finite")
            object.__setattr__(self, name, value)

    @property
    def xy(self) -> Tuple[float, float]:
        return (self.x, self.y)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def ground(self) -> "Point3":
        """Same horizontal position at z = 0."""
        return Point3(self.x, self.y, 0.0)

    def with_z(self, z: float) -> "Point3":
        return Point3(self.x, self.y, z)

    def horizontal_distance(self, other: "Point3") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def distance(self, other: "Point3") -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2 + (self.z - other.z) ** 2)

    def to_list(self) -> List[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "Point3":
        if len(values) == 2:
            return cls(values[0], values[1], 0.0)
        if len(values) != 3:
            raise ValueError(f"Expected 2 or 3 coordinates, got {len(values)}")
        return cls(values[0], values[1], values[2])


@dataclass(frozen=True)
class BoxObstacle:
    """Represents an axis-aligned bounding box obstacle."""
    min_corner: Point3
    max_corner: Point3

    def __post_init__(self):
        lo, hi = self.min_corner, self.max_corner
        if lo.x > hi.x or lo.y > hi.y or lo.z > hi.z:
            raise ValueError(f"Obstacle corners are inverted: {lo.as_tuple()} > {hi.as_tuple()}")

    @property
    def top(self) -> float:
        return self.max_corner.z

    @property
    def footprint_bounds(self) -> Tuple[float, float, float, float]:
        return (self.min_corner.x, self.min_corner.y, self.max_corner.x, self.max_corner.y)

    @property
    def min_edge(self) -> float:
        return min(self.max_corner.x - self.min_corner.x, self.max_corner.y - self.min_corner.y)

    def blocks(self, p: Point3) -> bool:
        """True if p lies strictly inside the footprint and within the box height."""
        lo, hi = self.min_corner, self.max_corner
        return (lo.x < p.x < hi.x and lo.y < p.y < hi.y and lo.z <= p.z < hi.z)

    def to_dict(self) -> Dict[str, List[float]]:
        return {"min": self.min_corner.to_list(), "max": self.max_corner.to_list()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoxObstacle":
        return cls(Point3.from_list(data["min"]), Point3.from_list(data["max"]))


@dataclass(frozen=True)
class VehicleParams:
    """Speeds, flight-time limit, robustness margins and charging model of a team."""
    v_h: float = 10.0
    v_v: float = 2.0
    v_g: float = 2.5
    tau_a_max: float = 600.0
    delta_a: float = 0.0
    delta_g: float = 0.0
    gamma: float = 1.0
    z_min: float = 100.0
    sigma: float = 1.0
    swap_time: Optional[float] = None
    v_h_avg: Optional[float] = None
    v_g_avg: Optional[float] = None

    def __post_init__(self):
        for name in ("v_h", "v_v", "v_g", "tau_a_max", "z_min"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("delta_a", "delta_g", "gamma", "sigma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.swap_time is not None and self.swap_time < 0:
            raise ValueError(f"swap_time must be non-negative, got {self.swap_time}")
        # sustained speeds above nominal would void the adjustment budget guarantee
        if self.v_h_avg is not None and not 0 < self.v_h_avg <= self.v_h:
            raise ValueError(f"v_h_avg must lie in (0, v_h], got {self.v_h_avg}")
        if self.v_g_avg is not None and not 0 < self.v_g_avg <= self.v_g:
            raise ValueError(f"v_g_avg must lie in (0, v_g], got {self.v_g_avg}")

    @property
    def tau_tl(self) -> float:
        """Constant take-off/landing time to and from z_min."""
        return self.z_min / self.v_v

    @property
    def sustained_h_speed(self) -> float:
        return self.v_h_avg if self.v_h_avg is not None else self.v_h

    @property
    def sustained_g_speed(self) -> float:
        return self.v_g_avg if self.v_g_avg is not None else self.v_g

    def replace(self, **changes) -> "VehicleParams":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "v_h": self.v_h,
            "v_v": self.v_v,
            "v_g": self.v_g,
            "tau_a_max": self.tau_a_max,
            "delta_a": self.delta_a,
            "delta_g": self.delta_g,
            "gamma": self.gamma,
            "z_min": self.z_min,
            "sigma": self.sigma,
            "swap_time": self.swap_time,
            "v_h_avg": self.v_h_avg,
            "v_g_avg": self.v_g_avg,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VehicleParams":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"Unknown vehicle parameters: {sorted(unknown)}")
        return cls(**known)


@dataclass(frozen=True)
class Team:
    """A UAV-UGV team with its start and finish ground positions."""
    index: int
    start: Point3
    finish: Point3

    def to_dict(self) -> Dict[str, Any]:
        return {"index": self.index, "start": self.start.to_list(), "finish": self.finish.to_list()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Team":
        return cls(int(data["index"]), Point3.from_list(data["start"]), Point3.from_list(data["finish"]))


@dataclass(frozen=True)
class TourRow:
    """One UAV tour: release point, visited air points, collect point."""
    release: Point3
    visits: Tuple[Point3, ...]
    collect: Point3

    def __post_init__(self):
        object.__setattr__(self, "visits", tuple(self.visits))

    @property
    def is_trivial(self) -> bool:
        return not self.visits

    def with_collect(self, collect: Point3) -> "TourRow":
        return TourRow(self.release, self.visits, collect)

    def with_endpoints(self, release: Point3, collect: Point3) -> "TourRow":
        return TourRow(release, self.visits, collect)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "release": self.release.to_list(),
            "visits": [v.to_list() for v in self.visits],
            "collect": self.collect.to_list(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TourRow":
        return cls(
            Point3.from_list(data["release"]),
            tuple(Point3.from_list(v) for v in data.get("visits", [])),
            Point3.from_list(data["collect"]),
        )

    @classmethod
    def trivial(cls, at: Point3) -> "TourRow":
        return cls(at, (), at)


@dataclass(frozen=True)
class TeamPlan:
    """The finalized plan of one team (rows of the waypoint matrix)."""
    team: Team
    rows: Tuple[TourRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    def tours(self) -> List[Tuple[int, TourRow]]:
        """Non-trivial rows with their row index."""
        return [(i, row) for i, row in enumerate(self.rows) if not row.is_trivial]

    def visited_points(self) -> List[Point3]:
        return [v for row in self.rows for v in row.visits]

    def to_matrix(self) -> List[List[Point3]]:
        """Materialize the n x (n + 2) waypoint matrix, padding by repetition."""
        n = len(self.rows)
        matrix = []
        for row in self.rows:
            entries = [row.release]
            for j in range(n):
                entries.append(row.visits[j] if j < len(row.visits) else entries[-1])
            entries.append(row.collect)
            matrix.append(entries)
        return matrix

    @classmethod
    def from_matrix(cls, team: Team, matrix: Sequence[Sequence[Point3]]) -> "TeamPlan":
        """Parse a waypoint matrix back into rows; repeated entries mean no motion."""
        rows = []
        for entries in matrix:
            if len(entries) != len(matrix) + 2:
                raise ValueError(f"Row has {len(entries)} entries, expected {len(matrix) + 2}")
            visits = []
            previous = entries[0]
            for entry in entries[1:-1]:
                if entry != previous:
                    visits.append(entry)
                previous = entry
            rows.append(TourRow(entries[0], tuple(visits), entries[-1]))
        return cls(team, tuple(rows))

    def to_dict(self) -> Dict[str, Any]:
        return {"team": self.team.to_dict(), "rows": [row.to_dict() for row in self.rows]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TeamPlan":
        return cls(Team.from_dict(data["team"]), tuple(TourRow.from_dict(r) for r in data["rows"]))


@dataclass(frozen=True)
class MissionPlan:
    """One team plan per team, ordered by team index."""
    team_plans: Tuple[TeamPlan, ...]

    def __post_init__(self):
        object.__setattr__(self, "team_plans", tuple(self.team_plans))

    def team_plan(self, index: int) -> TeamPlan:
        for plan in self.team_plans:
            if plan.team.index == index:
                return plan
        raise KeyError(f"No plan for team {index}")

    def to_dict(self) -> Dict[str, Any]:
        return {"team_plans": [plan.to_dict() for plan in self.team_plans]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MissionPlan":
        return cls(tuple(TeamPlan.from_dict(p) for p in data["team_plans"]))


@dataclass(frozen=True)
class Partition:
    """Monitoring points grouped per team (same order as the teams)."""
    groups: Tuple[Tuple[Point3, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in self.groups))

    def points_for(self, position: int) -> Tuple[Point3, ...]:
        return self.groups[position]

    def sizes(self) -> List[int]:
        return [len(g) for g in self.groups]


@dataclass(frozen=True)
class VisitSequence:
    """Ordered air points a team's UAV visits."""
    points: Tuple[Point3, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def length(self) -> float:
        """Straight-line cruise length through the sequence."""
        return sum(a.distance(b) for a, b in zip(self.points, self.points[1:]))


@dataclass
class Scenario:
    """A complete planning problem: world, vehicles, teams and monitoring points."""
    environment: "Environment"
    params: VehicleParams
    teams: Tuple[Team, ...]
    points: Tuple[Point3, ...]
    seed: Optional[int] = None
    preset: str = "custom"
    vtol_assumption: bool = True

    def __post_init__(self):
        self.teams = tuple(self.teams)
        self.points = tuple(self.points)
        if not self.teams:
            raise ValueError("A scenario needs at least one team")
        if [t.index for t in self.teams] != list(range(1, len(self.teams) + 1)):
            raise ValueError("Team indices must be 1..m in order")
        if abs(self.params.z_min - self.environment.min_flight_altitude) > 1e-9:
            raise ValueError(
                f"Vehicle z_min {self.params.z_min} differs from environment "
                f"min flight altitude {self.environment.min_flight_altitude}"
            )
        for team in self.teams:
            for anchor in (team.start, team.finish):
                if anchor.z != 0.0 or not self.environment.is_feasible(anchor):
                    raise ValueError(f"Team {team.index} anchor {anchor.as_tuple()} is not feasible ground")
        for p in self.points:
            if p.z <= 0.0 or not self.environment.is_feasible(p):
                raise ValueError(f"Monitoring point {p.as_tuple()} is not a feasible air point")

    @property
    def m(self) -> int:
        return len(self.teams)

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass
class ConstraintCheck:
    """Outcome of one constraint evaluation."""
    constraint: Constraint
    passed: bool
    team: Optional[int] = None
    row: Optional[int] = None
    column: Optional[int] = None
    slack: Optional[float] = None
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constraint": self.constraint.value,
            "passed": self.passed,
            "team": self.team,
            "row": self.row,
            "column": self.column,
            "slack": self.slack,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    """Per-constraint pass/fail results with offending indices and slacks."""
    checks: List[ConstraintCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[ConstraintCheck]:
        return [check for check in self.checks if not check.passed]

    def failures_of(self, constraint: Constraint) -> List[ConstraintCheck]:
        return [check for check in self.failures if check.constraint == constraint]

    def add(self, check: ConstraintCheck):
        self.checks.append(check)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}: {len(self.checks)} checks, {len(self.failures)} failures"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": len(self.checks),
            "failures": [check.to_dict() for check in self.failures],
        }


@dataclass(frozen=True)
class TourRobustness:
    """Slack of one tour against the maximum flight time."""
    delta_hat_a: float
    delta_hat_g: float


@dataclass(frozen=True)
class AdjustmentBudget:
    """Distances a tour's release/collect points may move during execution."""
    combined_deviation_radius: float
    ground_slack: float
    planned_ground_length: Optional[float] = None


@dataclass
class TourExecution:
    """Realized outcome of one tour during a simulated execution."""
    team: int
    row: int
    planned_tau_a: float
    planned_tau_g: float
    realized_tau_a: float
    realized_tau_g: float
    original_release: Point3
    original_collect: Point3
    release: Point3
    collect: Point3
    violations: List[ViolationKind] = field(default_factory=list)

    @property
    def release_shift(self) -> float:
        return self.original_release.distance(self.release)

    @property
    def collect_shift(self) -> float:
        return self.original_collect.distance(self.collect)

    @property
    def adjusted(self) -> bool:
        return self.release_shift > 0.0 or self.collect_shift > 0.0

    def to_row(self) -> Dict[str, Any]:
        return {
            "team": self.team,
            "tour": self.row,
            "planned_tau_a": round(self.planned_tau_a, 6),
            "realized_tau_a": round(self.realized_tau_a, 6),
            "planned_tau_g": round(self.planned_tau_g, 6),
            "realized_tau_g": round(self.realized_tau_g, 6),
            "release_shift": round(self.release_shift, 6),
            "collect_shift": round(self.collect_shift, 6),
            "old_release": " ".join(f"{c:.3f}" for c in self.original_release.as_tuple()),
            "new_release": " ".join(f"{c:.3f}" for c in self.release.as_tuple()),
            "old_collect": " ".join(f"{c:.3f}" for c in self.original_collect.as_tuple()),
            "new_collect": " ".join(f"{c:.3f}" for c in self.collect.as_tuple()),
            "violations": ";".join(v.value for v in self.violations),
        }


@dataclass
class ExecutionReport:
    """Realized times, adjustments and violation flags of one simulated execution."""
    seed: Optional[int]
    team_times: Dict[int, float]
    tours: List[TourExecution]
    unvisited: List[Point3]
    search_policy: str = ""

    @property
    def violation_count(self) -> int:
        return sum(1 for tour in self.tours if tour.violations)

    @property
    def energy_violations(self) -> int:
        """Tours whose realized flight or UGV transfer exceeded the flight limit."""
        kinds = (ViolationKind.FLIGHT_ENERGY, ViolationKind.GROUND_RENDEZVOUS)
        return sum(1 for tour in self.tours if any(v in kinds for v in tour.violations))

    @property
    def success(self) -> bool:
        return self.violation_count == 0 and not self.unvisited

    @property
    def objective(self) -> float:
        return max(self.team_times.values()) if self.team_times else 0.0

    def csv_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for tour in self.tours:
            row = {"seed": self.seed}
            row.update(tour.to_row())
            row["search_policy"] = self.search_policy
            rows.append(row)
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "success": self.success,
            "objective": self.objective,
            "team_times": {str(k): v for k, v in self.team_times.items()},
            "violation_count": self.violation_count,
            "energy_violations": self.energy_violations,
            "search_policy": self.search_policy,
            "unvisited": [p.to_list() for p in self.unvisited],
            "tours": [tour.to_row() for tour in self.tours],
        }
