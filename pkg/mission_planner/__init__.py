"""
UAV-UGV Mission Planner Package

Plans multi-team UAV-UGV monitoring missions that respect the UAV flight-time
limit with designer-chosen robustness margins, and checks them against unknown
obstacles in simulation.
"""

from .models import (
    Point3, BoxObstacle, VehicleParams, Team, TourRow, TeamPlan, MissionPlan, Scenario,
    ValidationReport, ExecutionReport,
)
from .geometry import Environment
from .planner import MissionPlanner, plan_mission, mission_time, objective, validate
from .simulator import generate_instance, inject_unknown_obstacles, execute, run_monte_carlo
from .oracle import exact_plan

__all__ = [
    'Point3', 'BoxObstacle', 'VehicleParams', 'Team', 'TourRow', 'TeamPlan', 'MissionPlan', 'Scenario',
    'ValidationReport', 'ExecutionReport', 'Environment', 'MissionPlanner', 'plan_mission',
    'mission_time', 'objective', 'validate', 'generate_instance', 'inject_unknown_obstacles',
    'execute', 'run_monte_carlo', 'exact_plan',
]
