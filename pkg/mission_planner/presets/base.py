"""
Base class for scenario presets.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..models import BoxObstacle, Point3, Scenario, VehicleParams
from ..simulator import DEFAULT_BOUNDS, generate_instance


class ScenarioPreset(ABC):
    """A family of generated scenarios plus the sweep grid it is benchmarked on."""

    name: str = "base"
    description: str = ""
    uses_oracle: bool = False

    def __init__(self, user_config: Optional[Dict[str, Any]] = None):
        self.user_config = user_config or {}

    @abstractmethod
    def default_grid(self) -> Tuple[List[int], List[int]]:
        """Default (n values, m values) of a benchmark sweep."""
        pass

    @abstractmethod
    def team_positions(self, m: int) -> Optional[Sequence[Tuple[Point3, Point3]]]:
        """(start, finish) per team, or None for the standard anchors."""
        pass

    def bounds(self) -> Tuple[float, float, float]:
        return DEFAULT_BOUNDS

    def obstacles(self) -> List[BoxObstacle]:
        return []

    def base_params(self) -> Dict[str, Any]:
        return {}

    def params(self, overrides: Optional[Dict[str, Any]] = None) -> VehicleParams:
        """Preset parameters with non-None overrides applied."""
        values = dict(self.base_params())
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return VehicleParams.from_dict(values)

    def validate_size(self, n: int, m: int):
        if not n >= m >= 1:
            raise ValueError(f"{self.name}: need n >= m >= 1, got n={n}, m={m}")

    def generate(self, seed: int, n: int, m: int, overrides: Optional[Dict[str, Any]] = None) -> Scenario:
        """Deterministic scenario for (seed, n, m)."""
        self.validate_size(n, m)
        return generate_instance(
            seed, n, m,
            bounds=self.bounds(),
            team_positions=self.team_positions(m),
            params=self.params(overrides),
            obstacles=self.obstacles(),
            preset=self.name,
        )
