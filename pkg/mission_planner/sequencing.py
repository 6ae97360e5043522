"""
Fixed-endpoint visiting order for one team's monitoring points.

Christofides-style path construction (spanning tree, parity correction with both
endpoints forced odd, Euler walk, shortcutting) followed by a 2-opt pass that
keeps the first and last points pinned.
"""

import logging
from typing import List, Optional, Sequence

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

from .geometry import Environment
from .models import Point3, VisitSequence
from .partition import anchor_distance

IMPROVEMENT_TOLERANCE = 1e-9


def distance_matrix(points: Sequence[Point3]) -> np.ndarray:
    """Pairwise straight-line cruise distances."""
    coords = np.array([p.as_tuple() for p in points], dtype=float).reshape(-1, 3)
    return cdist(coords, coords)


def path_length(order: Sequence[int], distances: np.ndarray) -> float:
    return float(sum(distances[a, b] for a, b in zip(order, order[1:])))


def _argmin(values: Sequence[float], exclude: Optional[int] = None) -> int:
    best, best_value = -1, float("inf")
    for i, value in enumerate(values):
        if i != exclude and value < best_value:
            best, best_value = i, value
    return best


def christofides_path(distances: np.ndarray, source: int, target: int) -> List[int]:
    """Hamiltonian path from source to target through every node.

    Args:
        distances: Symmetric metric distance matrix
        source: First node
        target: Last node (different from source)

    Returns:
        Node order starting at source and ending at target
    """
    n = len(distances)
    if n == 2:
        return [source, target]

    complete = nx.Graph()
    for i in range(n):
        for j in range(i + 1, n):
            complete.add_edge(i, j, weight=float(distances[i, j]))
    tree = nx.minimum_spanning_tree(complete, weight="weight")

    odd = {v for v, degree in tree.degree() if degree % 2 == 1}
    needs_fix = odd ^ {source, target}
    multigraph = nx.MultiGraph(tree)
    if needs_fix:
        matching = nx.min_weight_matching(complete.subgraph(sorted(needs_fix)), weight="weight")
        for u, v in sorted(tuple(sorted(edge)) for edge in matching):
            multigraph.add_edge(u, v, weight=float(distances[u, v]))

    walk = [source] + [v for _, v in nx.eulerian_path(multigraph, source=source)]
    order, seen = [], {target}
    for node in walk:
        if node not in seen:
            order.append(node)
            seen.add(node)
    order.append(target)
    return order


def two_opt(order: Sequence[int], distances: np.ndarray) -> List[int]:
    """Segment-reversal local search with both endpoints pinned; never lengthens the path."""
    route = list(order)
    n = len(route)
    improved = True
    while improved:
        improved = False
        for i in range(1, n - 2):
            for j in range(i + 1, n - 1):
                a, b, c, d = route[i - 1], route[i], route[j], route[j + 1]
                delta = distances[a, c] + distances[b, d] - distances[a, b] - distances[c, d]
                if delta < -IMPROVEMENT_TOLERANCE:
                    route[i:j + 1] = reversed(route[i:j + 1])
                    improved = True
    return route


def plan_visit_sequence(points: Sequence[Point3], p_o: Point3, p_f: Point3, env: Environment) -> VisitSequence:
    """Order the team's points: nearest to p_o first, nearest to p_f last.

    If the same point is nearest to both anchors it is visited first and the
    second-nearest point to p_f is visited last.
    """
    points = list(points)
    if not points:
        raise ValueError("Cannot sequence an empty point set")
    if len(points) == 1:
        return VisitSequence(tuple(points))

    first = _argmin([anchor_distance(env, p, p_o) for p in points])
    to_finish = [anchor_distance(env, p, p_f) for p in points]
    last = _argmin(to_finish)
    if last == first:
        last = _argmin(to_finish, exclude=first)

    distances = distance_matrix(points)
    order = christofides_path(distances, first, last)
    constructed = path_length(order, distances)
    order = two_opt(order, distances)
    logging.debug(
        f"Sequenced {len(points)} points: construction {constructed:.1f} m, "
        f"after 2-opt {path_length(order, distances):.1f} m"
    )
    return VisitSequence(tuple(points[i] for i in order))
