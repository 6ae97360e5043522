"""
World geometry: bounds, box obstacles, feasible ground/air sets, ground shortest
paths over a visibility graph, and the ground projection used for release points.
"""

import math
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import shapely
from scipy import ndimage
from shapely.geometry import Polygon
from shapely.ops import unary_union

from .exceptions import DisconnectedGround, InvalidEnvironment
from .models import BoxObstacle, Point3

# Shrink distance used to turn closed footprints into their open interiors.
EPS = 1e-6
# Coarse occupancy grid for the connectivity check.
GRID_MIN_RESOLUTION = 5.0
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GroundPath:
    """Represents an obstacle-avoiding path on the ground plane."""
    waypoints: Tuple[Point3, ...]
    length: float

    def to_dict(self) -> Dict[str, Any]:
        return {"waypoints": [p.to_list() for p in self.waypoints], "length": self.length}


class Environment:
    """Cuboid world with known box obstacles.

    The object is immutable after construction. The visibility graph and the
    corner-to-corner distance table are derived lazily and cached, so queries are
    pure functions of the constructor arguments.
    """

    def __init__(self, bounds: Sequence[float], known_obstacles: Iterable[BoxObstacle] = (),
                 min_flight_altitude: float = 100.0, check_connectivity: bool = True):
        """Initialize the environment.

        Args:
            bounds: (x_max, y_max, z_max) in meters
            known_obstacles: Box obstacles known before planning
            min_flight_altitude: Minimum flight altitude z_min in meters
            check_connectivity: Reject worlds whose feasible ground is disconnected

        Raises:
            InvalidEnvironment: bad bounds, or an obstacle above z_min / off the ground
            DisconnectedGround: the feasible ground set is not connected
        """
        if len(bounds) != 3 or min(bounds) <= 0:
            raise InvalidEnvironment(f"Bounds must be three positive extents, got {bounds}")
        self.bounds: Tuple[float, float, float] = tuple(float(b) for b in bounds)
        self.min_flight_altitude = float(min_flight_altitude)
        self.known_obstacles: Tuple[BoxObstacle, ...] = tuple(known_obstacles)

        if not 0 <= self.min_flight_altitude <= self.bounds[2]:
            raise InvalidEnvironment(
                f"Minimum flight altitude {self.min_flight_altitude} outside [0, {self.bounds[2]}]"
            )
        for obstacle in self.known_obstacles:
            if obstacle.min_corner.z != 0.0:
                raise InvalidEnvironment(f"Obstacle {obstacle.to_dict()} does not rest on the ground")
            if obstacle.top > self.min_flight_altitude:
                raise InvalidEnvironment(
                    f"Obstacle {obstacle.to_dict()} rises above the minimum flight altitude "
                    f"{self.min_flight_altitude}"
                )

        x_max, y_max, _ = self.bounds
        self._world = shapely.box(0.0, 0.0, x_max, y_max)
        footprints = [shapely.box(*o.footprint_bounds) for o in self.known_obstacles if o.min_edge > 0]
        self._blocked = unary_union(footprints) if footprints else Polygon()
        self._interior = self._blocked.buffer(-EPS, join_style="mitre") if footprints else Polygon()
        shapely.prepare(self._interior)
        self._free = self._world.difference(self._blocked)
        self._distance_cache: Dict[Tuple[float, float, float, float], float] = {}

        if check_connectivity:
            self._check_connectivity()
        logging.debug(f"Environment {self.bounds} with {len(self.known_obstacles)} known obstacles ready")

    # ------------------------------------------------------------------
    # Construction helpers
    # ------------------------------------------------------------------

    def _grid_resolution(self) -> float:
        edges = [o.min_edge for o in self.known_obstacles if o.min_edge > 0]
        return max(GRID_MIN_RESOLUTION, min(edges) / 4.0) if edges else GRID_MIN_RESOLUTION

    def occupancy_grid(self, resolution: Optional[float] = None) -> Tuple[np.ndarray, float]:
        """Boolean grid of free ground cells (cell centers strictly outside footprints)."""
        res = resolution or self._grid_resolution()
        x_max, y_max, _ = self.bounds
        xs = np.arange(res / 2.0, x_max, res)
        ys = np.arange(res / 2.0, y_max, res)
        free = np.ones((len(ys), len(xs)), dtype=bool)
        for obstacle in self.known_obstacles:
            x0, y0, x1, y1 = obstacle.footprint_bounds
            cols = slice(np.searchsorted(xs, x0, side="right"), np.searchsorted(xs, x1, side="left"))
            rows = slice(np.searchsorted(ys, y0, side="right"), np.searchsorted(ys, y1, side="left"))
            free[rows, cols] = False
        return free, res

    def _check_connectivity(self):
        if not self.known_obstacles:
            return
        free, res = self.occupancy_grid()
        _, components = ndimage.label(free)
        if components != 1:
            raise DisconnectedGround(
                f"Feasible ground splits into {components} regions at {res:.2f} m resolution"
            )

    @cached_property
    def _corners(self) -> np.ndarray:
        """Vertices of the free ground region (world corners and footprint corners)."""
        coords = []
        for polygon in shapely.get_parts(self._free):
            for ring in [polygon.exterior, *polygon.interiors]:
                coords.extend(ring.coords[:-1])
        if not coords:
            return np.zeros((0, 2))
        return np.unique(np.asarray(coords, dtype=float), axis=0)

    @cached_property
    def _free_edges(self) -> np.ndarray:
        """Boundary segments of the free ground region, shape (E, 2, 2)."""
        edges = []
        for polygon in shapely.get_parts(self._free):
            for ring in [polygon.exterior, *polygon.interiors]:
                pts = np.asarray(ring.coords, dtype=float)
                edges.extend(np.stack([pts[:-1], pts[1:]], axis=1))
        return np.asarray(edges, dtype=float).reshape(-1, 2, 2)

    def _visible_mask(self, origin: Tuple[float, float], targets: np.ndarray) -> np.ndarray:
        if len(targets) == 0:
            return np.zeros(0, dtype=bool)
        if self._interior.is_empty:
            return np.ones(len(targets), dtype=bool)
        starts = np.broadcast_to(np.asarray(origin, dtype=float), targets.shape)
        segments = shapely.linestrings(np.stack([starts, targets], axis=1))
        return ~shapely.intersects(self._interior, segments)

    @cached_property
    def visibility_graph(self) -> nx.Graph:
        """Graph over free-region corners with an edge for every unobstructed segment."""
        corners = self._corners
        graph = nx.Graph()
        graph.add_nodes_from(range(len(corners)))
        for i in range(len(corners) - 1):
            others = corners[i + 1:]
            visible = self._visible_mask(tuple(corners[i]), others)
            lengths = np.hypot(*(others - corners[i]).T)
            for offset in np.flatnonzero(visible):
                graph.add_edge(i, i + 1 + int(offset), weight=float(lengths[offset]))
        logging.debug(f"Visibility graph: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
        return graph

    @cached_property
    def _corner_distances(self) -> np.ndarray:
        graph = self.visibility_graph
        if graph.number_of_nodes() == 0:
            return np.zeros((0, 0))
        return nx.floyd_warshall_numpy(graph, nodelist=range(graph.number_of_nodes()), weight="weight")

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def in_bounds(self, p: Point3) -> bool:
        x_max, y_max, z_max = self.bounds
        return 0.0 <= p.x <= x_max and 0.0 <= p.y <= y_max and 0.0 <= p.z <= z_max

    def is_feasible(self, p: Point3) -> bool:
        """True iff p is inside the (closed) bounds and outside every known obstacle."""
        return self.in_bounds(p) and not any(o.blocks(p) for o in self.known_obstacles)

    def ground_blocked(self, p: Point3) -> bool:
        """True if the ground position below/above p lies inside a footprint."""
        return (not self._interior.is_empty) and bool(shapely.contains_xy(self._interior, p.x, p.y))

    def segment_visible(self, a: Point3, b: Point3) -> bool:
        """True if the ground segment a-b avoids every footprint interior."""
        if self._interior.is_empty:
            return True
        return not shapely.intersects(self._interior, shapely.linestrings([a.xy, b.xy]))

    def segment_blocked(self, a: Point3, b: Point3) -> bool:
        """True if the 3D segment a-b passes through the interior of a known obstacle."""
        start = np.array(a.as_tuple())
        delta = np.array(b.as_tuple()) - start
        for obstacle in self.known_obstacles:
            lo = np.array(obstacle.min_corner.as_tuple())
            hi = np.array(obstacle.max_corner.as_tuple())
            t0, t1 = 0.0, 1.0
            for axis in range(3):
                if abs(delta[axis]) < 1e-12:
                    if not lo[axis] < start[axis] < hi[axis]:
                        t0, t1 = 1.0, 0.0
                        break
                    continue
                ta = (lo[axis] - start[axis]) / delta[axis]
                tb = (hi[axis] - start[axis]) / delta[axis]
                t0 = max(t0, min(ta, tb))
                t1 = min(t1, max(ta, tb))
            if t0 < t1:
                return True
        return False

    def project_to_ground(self, p: Point3) -> Point3:
        """Closest feasible ground point to p.

        Unobstructed positions project vertically. Inside a footprint the result is the
        nearest point of the free region's boundary; ties go to the smallest x, then y.
        """
        below = p.ground()
        if not self.ground_blocked(below):
            return below
        edges = self._free_edges
        starts, ends = edges[:, 0, :], edges[:, 1, :]
        direction = ends - starts
        length_sq = np.einsum("ij,ij->i", direction, direction)
        target = np.array(below.xy)
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.einsum("ij,ij->i", target - starts, direction) / length_sq
        t = np.clip(np.nan_to_num(t, nan=0.0), 0.0, 1.0)
        feet = np.vstack([starts + t[:, None] * direction, self._corners])
        offsets = np.hypot(*(feet - target).T)
        best = offsets.min()
        ties = feet[offsets <= best + TIE_TOLERANCE]
        order = np.lexsort((ties[:, 1], ties[:, 0]))
        x, y = ties[order[0]]
        return Point3(float(x), float(y), 0.0)

    def _key(self, a: Point3, b: Point3) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return (a.xy, b.xy) if a.xy <= b.xy else (b.xy, a.xy)

    def _corner_route(self, a: Tuple[float, float], b: Tuple[float, float]) -> Tuple[float, int, int]:
        corners = self._corners
        visible_a = self._visible_mask(a, corners)
        visible_b = self._visible_mask(b, corners)
        if not visible_a.any() or not visible_b.any():
            raise DisconnectedGround(f"No ground path between {a} and {b}")
        idx_a = np.flatnonzero(visible_a)
        idx_b = np.flatnonzero(visible_b)
        leg_a = np.hypot(*(corners[idx_a] - np.asarray(a)).T)
        leg_b = np.hypot(*(corners[idx_b] - np.asarray(b)).T)
        total = leg_a[:, None] + self._corner_distances[np.ix_(idx_a, idx_b)] + leg_b[None, :]
        flat = int(np.argmin(total))
        row, col = divmod(flat, total.shape[1])
        length = float(total[row, col])
        if not math.isfinite(length):
            raise DisconnectedGround(f"No ground path between {a} and {b}")
        return length, int(idx_a[row]), int(idx_b[col])

    def ground_distance(self, a: Point3, b: Point3) -> float:
        """Length of the shortest obstacle-avoiding ground path between a and b."""
        first, second = self._key(a, b)
        cached = self._distance_cache.get(first + second)
        if cached is not None:
            return cached
        if first == second:
            length = 0.0
        elif self.segment_visible(Point3(*first), Point3(*second)):
            length = math.hypot(second[0] - first[0], second[1] - first[1])
        else:
            length, _, _ = self._corner_route(first, second)
        self._distance_cache[first + second] = length
        return length

    def ground_shortest_path(self, a: Point3, b: Point3) -> GroundPath:
        """Shortest ground path with its waypoints (all at z = 0)."""
        start, goal = a.ground(), b.ground()
        if start.xy == goal.xy:
            return GroundPath((start,), 0.0)
        if self.segment_visible(start, goal):
            return GroundPath((start, goal), start.horizontal_distance(goal))
        length, u, v = self._corner_route(start.xy, goal.xy)
        nodes = nx.shortest_path(self.visibility_graph, u, v, weight="weight")
        corners = [Point3(float(self._corners[k][0]), float(self._corners[k][1]), 0.0) for k in nodes]
        waypoints = (start, *corners, goal)
        total = sum(p.horizontal_distance(q) for p, q in zip(waypoints, waypoints[1:]))
        return GroundPath(tuple(waypoints), total)

    def air_leg_length(self, a: Point3, b: Point3) -> float:
        """Straight-line length of a flight leg (free space above z_min)."""
        return a.distance(b)

    def with_obstacles(self, extra: Iterable[BoxObstacle], check_connectivity: bool = True) -> "Environment":
        """New environment that also contains the given obstacles."""
        return Environment(self.bounds, (*self.known_obstacles, *extra), self.min_flight_altitude,
                           check_connectivity=check_connectivity)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Environment):
            return NotImplemented
        return (self.bounds == other.bounds and self.known_obstacles == other.known_obstacles
                and self.min_flight_altitude == other.min_flight_altitude)

    def __hash__(self) -> int:
        return hash((self.bounds, self.known_obstacles, self.min_flight_altitude))

    def __repr__(self) -> str:
        return f"Environment(bounds={self.bounds}, obstacles={len(self.known_obstacles)}, z_min={self.min_flight_altitude})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bounds": list(self.bounds),
            "min_flight_altitude": self.min_flight_altitude,
            "obstacles": [o.to_dict() for o in self.known_obstacles],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Environment":
        return cls(
            data["bounds"],
            [BoxObstacle.from_dict(o) for o in data.get("obstacles", [])],
            data.get("min_flight_altitude", 100.0),
        )


def is_feasible(env: Environment, p: Point3) -> bool:
    return env.is_feasible(p)


def project_to_ground(env: Environment, p: Point3) -> Point3:
    return env.project_to_ground(p)


def ground_distance(env: Environment, a: Point3, b: Point3) -> float:
    return env.ground_distance(a, b)


def ground_shortest_path(env: Environment, a: Point3, b: Point3) -> GroundPath:
    return env.ground_shortest_path(a, b)


def air_leg_length(env: Environment, a: Point3, b: Point3) -> float:
    return env.air_leg_length(a, b)


def grid_ground_distance(env: Environment, a: Point3, b: Point3, resolution: float = 10.0) -> float:
    """8-connected grid search between the cells of a and b (test oracle).

    Moves between cells are allowed when both cells are free; diagonal moves also
    need both side cells free. Start/goal snap to their nearest free cell.
    """
    free, res = env.occupancy_grid(resolution)
    rows, cols = free.shape
    graph = nx.Graph()
    for r in range(rows):
        for c in range(cols):
            if not free[r, c]:
                continue
            for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
                rr, cc = r + dr, c + dc
                if not (0 <= rr < rows and 0 <= cc < cols) or not free[rr, cc]:
                    continue
                if dr and dc and not (free[r, cc] and free[rr, c]):
                    continue
                graph.add_edge((r, c), (rr, cc), weight=res * math.hypot(dr, dc))

    def snap(p: Point3) -> Tuple[int, int]:
        centers = [(abs((c + 0.5) * res - p.x) + abs((r + 0.5) * res - p.y), (r, c)) for (r, c) in graph.nodes]
        return min(centers)[1]

    source, target = snap(a), snap(b)
    inner = nx.shortest_path_length(graph, source, target, weight="weight")
    sx, sy = (source[1] + 0.5) * res, (source[0] + 0.5) * res
    tx, ty = (target[1] + 0.5) * res, (target[0] + 0.5) * res
    return inner + math.hypot(sx - a.x, sy - a.y) + math.hypot(tx - b.x, ty - b.y)


def nearest_ground_by_grid(env: Environment, p: Point3, resolution: float = 10.0) -> List[Point3]:
    """Free ground grid points (cell corners included) for brute-force projection checks."""
    x_max, y_max, _ = env.bounds
    xs = np.arange(0.0, x_max + resolution / 2, resolution)
    ys = np.arange(0.0, y_max + resolution / 2, resolution)
    points = []
    for x in xs:
        for y in ys:
            q = Point3(float(min(x, x_max)), float(min(y, y_max)), 0.0)
            if env.is_feasible(q):
                points.append(q)
    return points
