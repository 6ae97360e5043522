"""
Travel-time model: UAV legs with VTOL at the minimum flight altitude, UGV ground
legs, and the recharge model applied between tours.
"""

from typing import List, Tuple

from .geometry import Environment
from .models import Point3, TourRow, VehicleParams


def uav_leg_time(params: VehicleParams, a: Point3, b: Point3) -> float:
    """Time for one straight UAV leg; horizontal and vertical motion run simultaneously.

    Args:
        params: Vehicle parameters
        a: Leg start
        b: Leg end

    Returns:
        max(horizontal_distance / v_h, vertical_distance / v_v) in seconds
    """
    return max(a.horizontal_distance(b) / params.v_h, abs(a.z - b.z) / params.v_v)


def flight_waypoints(params: VehicleParams, row: TourRow) -> List[Point3]:
    """Release, climb point, visits, descent point and collect of a non-trivial row."""
    return [
        row.release,
        row.release.with_z(params.z_min),
        *row.visits,
        row.collect.with_z(params.z_min),
        row.collect,
    ]


def tour_time(params: VehicleParams, env: Environment, row: TourRow, slowdown: float = 1.0) -> float:
    """UAV flight time of one tour (zero for a trivial row).

    The UAV climbs vertically above the release point, cruises through the visits
    and descends above the collect point. ``slowdown`` scales the whole flight and
    models a uniform disturbance such as head wind.
    """
    if row.is_trivial:
        return 0.0
    waypoints = flight_waypoints(params, row)
    total = sum(uav_leg_time(params, a, b) for a, b in zip(waypoints, waypoints[1:]))
    return total * slowdown


def ugv_time(params: VehicleParams, env: Environment, a: Point3, b: Point3) -> float:
    """UGV driving time along the shortest ground path."""
    return env.ground_distance(a, b) / params.v_g


def row_times(params: VehicleParams, env: Environment, row: TourRow,
              slowdown: float = 1.0) -> Tuple[float, float]:
    """(UAV tour time, UGV release-to-collect time) of a row."""
    if row.is_trivial:
        return 0.0, 0.0
    return tour_time(params, env, row, slowdown), ugv_time(params, env, row.release, row.collect)


def recharge_time(params: VehicleParams, env: Environment, row: TourRow, slowdown: float = 1.0) -> float:
    """Charging time after a tour.

    Linear model gamma * max(flight, ground transfer); a configured ``swap_time``
    replaces it with a constant for every non-trivial tour.
    """
    if row.is_trivial:
        return 0.0
    if params.swap_time is not None:
        return params.swap_time
    return params.gamma * max(row_times(params, env, row, slowdown))
