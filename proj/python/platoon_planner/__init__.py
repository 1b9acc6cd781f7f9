"""Truck platoon coordination and fuel-optimal speed planning."""

from platoon_planner._core import (
    InfeasibleScenario,
    InvalidScenario,
    ParseError,
    PlanResult,
    Scenario,
    TooLarge,
    brute_force_plan,
    earliest_arrival,
    fuel_per_km,
    latest_arrival,
    plan,
    shortest_path,
    solo_baseline,
)

__all__ = [
    "InfeasibleScenario",
    "InvalidScenario",
    "ParseError",
    "PlanResult",
    "Scenario",
    "TooLarge",
    "brute_force_plan",
    "earliest_arrival",
    "fuel_per_km",
    "latest_arrival",
    "plan",
    "shortest_path",
    "solo_baseline",
]
