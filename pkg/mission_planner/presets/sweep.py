"""
Scalability preset: standard parameters and anchors, 24-cell (n, m) grid.
"""

from typing import List, Optional, Tuple

from .base import ScenarioPreset


class SweepPreset(ScenarioPreset):
    name = "table3"
    description = "Scalability sweep over n and m with the standard team anchors"

    def default_grid(self) -> Tuple[List[int], List[int]]:
        return [25, 50, 75, 100], [1, 2, 3, 4, 7, 10]

    def team_positions(self, m: int) -> Optional[list]:
        return None
