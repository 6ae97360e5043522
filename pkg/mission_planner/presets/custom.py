"""
User-defined preset read from the YAML user config.

Recognised keys::

    params:    {v_h: 10, delta_a: 60, ...}      # any vehicle parameter
    bounds:    [4000, 4000, 500]
    teams:     [{start: [0, 0], finish: [1900, 1900]}, ...]
    obstacles: [{min: [400, -100, 0], max: [600, 100, 50]}, ...]
    grid:      {n: [25, 50], m: [1, 2]}
"""

import logging
from typing import List, Optional, Tuple

from ..models import BoxObstacle, Point3
from ..simulator import DEFAULT_BOUNDS
from .base import ScenarioPreset


class CustomPreset(ScenarioPreset):
    name = "custom"
    description = "Scenario family described by the user config file"

    def default_grid(self) -> Tuple[List[int], List[int]]:
        grid = self.user_config.get("grid", {})
        return list(grid.get("n", [25])), list(grid.get("m", [1]))

    def bounds(self) -> Tuple[float, float, float]:
        return tuple(self.user_config.get("bounds", DEFAULT_BOUNDS))

    def base_params(self):
        return dict(self.user_config.get("params", {}))

    def obstacles(self) -> List[BoxObstacle]:
        return [BoxObstacle.from_dict(o) for o in self.user_config.get("obstacles", [])]

    def team_positions(self, m: int) -> Optional[List[Tuple[Point3, Point3]]]:
        teams = self.user_config.get("teams")
        if not teams:
            return None
        if len(teams) < m:
            raise ValueError(f"{self.name}: user config defines {len(teams)} teams, m={m} requested")
        logging.debug(f"Using {m} of {len(teams)} user-defined teams")
        return [(Point3.from_list(t["start"]), Point3.from_list(t["finish"])) for t in teams[:m]]
