"""
Scenario presets.

Each preset is a subclass of ScenarioPreset and is discovered automatically.
"""

from typing import Any, Dict, List, Optional, Type

from .base import ScenarioPreset
from .custom import CustomPreset
from .oracle_compare import OracleComparePreset
from .sweep import SweepPreset

__all__ = [
    'ScenarioPreset',
    'CustomPreset',
    'OracleComparePreset',
    'SweepPreset',
    'get_all_presets',
    'get_preset',
]


def get_all_presets() -> List[Type[ScenarioPreset]]:
    """Returns a list of all available preset classes."""
    return [cls for cls in ScenarioPreset.__subclasses__()]


def get_preset(name: str, user_config: Optional[Dict[str, Any]] = None) -> ScenarioPreset:
    for cls in get_all_presets():
        if cls.name == name:
            return cls(user_config)
    raise ValueError(f"Unknown preset {name!r}; available: {sorted(c.name for c in get_all_presets())}")
