"""
Oracle comparison preset: one team crossing the map diagonally, tiny n.
"""

from typing import List, Tuple

from ..models import Point3
from ..oracle import MAX_EXACT_POINTS
from .base import ScenarioPreset


class OracleComparePreset(ScenarioPreset):
    name = "table4"
    description = "Single team from (0,0,0) to (4000,4000,0), heuristic vs exhaustive oracle"
    uses_oracle = True

    def default_grid(self) -> Tuple[List[int], List[int]]:
        return [2, 3, 4, 5], [1]

    def team_positions(self, m: int) -> List[Tuple[Point3, Point3]]:
        x_max, y_max, _ = self.bounds()
        return [(Point3(0.0, 0.0, 0.0), Point3(x_max, y_max, 0.0))]

    def validate_size(self, n: int, m: int):
        if m != 1:
            raise ValueError(f"{self.name}: only m=1 is supported, got m={m}")
        if not 1 <= n <= MAX_EXACT_POINTS:
            raise ValueError(f"{self.name}: n must lie in 1..{MAX_EXACT_POINTS}, got {n}")
