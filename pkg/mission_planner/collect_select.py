"""
Collect-point selection over the layered release/collect graph.

Clusters are visited in a forced order (origin, release 1, collect candidates of
tour 1, release 2, ..., finish), so the cluster-selection problem is a shortest
path in a layered DAG and a forward dynamic program solves it exactly.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx

from .geometry import Environment
from .kinematics import recharge_time, tour_time, ugv_time
from .models import Point3, Team, TeamPlan, TourRow, VehicleParams
from .tours import PartialTeamPlan

ORIGIN = ("origin",)
FINISH = ("finish",)


@dataclass
class LayeredGraph:
    """Weighted DAG whose edges only join consecutive layers."""
    graph: nx.DiGraph
    layers: List[List[Hashable]]
    partial: PartialTeamPlan
    tour_rows: List[int] = field(default_factory=list)
    time_budget: float = 0.0

    def point(self, node: Hashable) -> Point3:
        return self.graph.nodes[node]["point"]

    def weight(self, u: Hashable, v: Hashable) -> float:
        return self.graph.edges[u, v]["weight"]

    def path_weight(self, nodes: Sequence[Hashable]) -> float:
        return sum(self.weight(u, v) for u, v in zip(nodes, nodes[1:]))

    def collect_layers(self) -> List[List[Hashable]]:
        return [layer for layer in self.layers if layer and layer[0][0] == "collect"]

    def path_for(self, choices: Sequence[Point3]) -> List[Hashable]:
        """Node path picking, for each tour, the candidate at the chosen point."""
        path = [ORIGIN]
        for row_index in self.tour_rows:
            path.append(("release", row_index))
            for node in self.graph.successors(("release", row_index)):
                if self.point(node) == choices[row_index]:
                    path.append(node)
                    break
            else:
                raise ValueError(f"{choices[row_index].as_tuple()} is not a candidate of row {row_index + 1}")
        path.append(FINISH)
        return path

    def choices_from_path(self, nodes: Sequence[Hashable]) -> List[Point3]:
        """Collect point per row of the partial plan (trivial rows keep their release)."""
        choices = [row.release for row in self.partial.rows]
        for node in nodes:
            if node[0] == "collect":
                choices[node[1]] = self.point(node)
        return choices


def build_collect_graph(partial: PartialTeamPlan, p_o: Point3, p_f: Point3,
                        params: VehicleParams, env: Environment) -> LayeredGraph:
    """Build the layered graph; trivial rows add no nodes.

    Args:
        partial: Output of the tour packing step
        p_o: Team start
        p_f: Team finish
        params: Vehicle parameters
        env: Planning environment

    Returns:
        LayeredGraph with edge weights in seconds
    """
    graph = nx.DiGraph()
    graph.add_node(ORIGIN, point=p_o)
    layers: List[List[Hashable]] = [[ORIGIN]]
    tour_rows = [i for i, row in enumerate(partial.rows) if not row.is_trivial]

    previous = [ORIGIN]
    for position, i in enumerate(tour_rows):
        row = partial.rows[i]
        release = ("release", i)
        graph.add_node(release, point=row.release)
        for node in previous:
            source = graph.nodes[node]["point"]
            if node == ORIGIN:
                weight = ugv_time(params, env, source, row.release)
            else:
                prior = partial.rows[node[1]].with_collect(source)
                weight = max(ugv_time(params, env, source, row.release), recharge_time(params, env, prior))
            graph.add_edge(node, release, weight=weight)
        layers.append([release])

        collects = []
        for j, c in enumerate(partial.candidate_sets[i]):
            node = ("collect", i, j)
            graph.add_node(node, point=c)
            candidate = row.with_collect(c)
            graph.add_edge(release, node, weight=max(ugv_time(params, env, row.release, c),
                                                     tour_time(params, env, candidate)))
            collects.append(node)
        layers.append(collects)
        previous = collects

    graph.add_node(FINISH, point=p_f)
    for node in previous:
        source = graph.nodes[node]["point"]
        if node == ORIGIN:
            weight = ugv_time(params, env, source, p_f)
        else:
            prior = partial.rows[node[1]].with_collect(source)
            weight = max(ugv_time(params, env, source, p_f), recharge_time(params, env, prior))
        graph.add_edge(node, FINISH, weight=weight)
    layers.append([FINISH])

    n_mu = len(partial.rows)
    logging.debug(f"Collect graph: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges")
    return LayeredGraph(graph, layers, partial, tour_rows, time_budget=params.sigma * n_mu ** 3)


def shortest_layered_path(g: LayeredGraph) -> Tuple[float, List[Hashable]]:
    """Forward dynamic program over the layers; ties keep the earlier predecessor."""
    cost: Dict[Hashable, float] = {ORIGIN: 0.0}
    back: Dict[Hashable, Optional[Hashable]] = {ORIGIN: None}
    for previous, layer in zip(g.layers, g.layers[1:]):
        for node in layer:
            best, best_cost = None, float("inf")
            for pred in previous:
                value = cost[pred] + g.weight(pred, node)
                if value < best_cost:
                    best, best_cost = pred, value
            cost[node], back[node] = best_cost, best
    path = [FINISH]
    while back[path[-1]] is not None:
        path.append(back[path[-1]])
    path.reverse()
    return cost[FINISH], path


def select_collect_points(g: LayeredGraph) -> List[Point3]:
    """Collect point per row minimizing the origin-to-finish path weight."""
    total, path = shortest_layered_path(g)
    logging.debug(f"Collect selection: path weight {total:.2f} s (budget {g.time_budget:.0f} never binding)")
    return g.choices_from_path(path)


def finalize_team_plan(partial: PartialTeamPlan, choices: Sequence[Point3], team: Team) -> TeamPlan:
    """Write the chosen collect points into the rows."""
    if len(choices) != len(partial.rows):
        raise ValueError(f"{len(choices)} choices for {len(partial.rows)} rows")
    rows = [row if row.is_trivial else row.with_collect(c) for row, c in zip(partial.rows, choices)]
    return TeamPlan(team, tuple(rows))


def independent_choices(g: LayeredGraph) -> List[Point3]:
    """Pick each tour's collect by its two incident edges alone (cross-check of the DP)."""
    choices = [row.release for row in g.partial.rows]
    for i in g.tour_rows:
        release = ("release", i)
        best, best_cost = None, float("inf")
        for node in g.graph.successors(release):
            (following,) = list(g.graph.successors(node))
            value = g.weight(release, node) + g.weight(node, following)
            if value < best_cost:
                best, best_cost = node, value
        choices[i] = g.point(best)
    return choices


def trivial_team_plan(team: Team) -> TeamPlan:
    """Plan of a team without monitoring points: one trivial row at its start."""
    return TeamPlan(team, (TourRow.trivial(team.start),))
