"""
Exceptions raised by the mission planner.
"""


class MissionPlannerError(Exception):
    """Base class for planner errors."""


class InvalidEnvironment(MissionPlannerError, ValueError):
    """The world description violates its own invariants."""


class DisconnectedGround(MissionPlannerError):
    """The feasible ground set is not connected, or no ground path exists."""


class InfeasibleInstance(MissionPlannerError):
    """Some monitoring point cannot be served even by a singleton tour."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class StructureMismatch(MissionPlannerError):
    """Two plans do not share the same rows and visits."""


class GenerationFailed(MissionPlannerError):
    """Random obstacle injection ran out of attempts."""


class AdjustmentExhausted(MissionPlannerError):
    """No admissible replacement release/collect point within the budget."""


class TooLarge(MissionPlannerError):
    """Input exceeds an exhaustive solver's enumeration limit."""


class ScenarioParseError(MissionPlannerError):
    """A scenario or plan document is malformed."""
