from __future__ import annotations

from dataclasses import dataclass

from .field import Spot


@dataclass(frozen=True)
class PhaseResult:
    """Time accounting and traversed path for one phase of one agent.

    ``path`` is a Cartesian polyline in meters. ``total_time`` is always the
    sum travel + service + transition, evaluated in that order.
    """

    travel_time: float
    service_time: float
    transition_time: float
    path: tuple[tuple[float, float], ...] = ()
    visited_spots: tuple[Spot, ...] = ()
    distance: float = 0.0
    transitions: int = 0
    provides_coordinates: bool = False

    @property
    def total_time(self) -> float:
        return self.travel_time + self.service_time + self.transition_time


EMPTY_PHASE = PhaseResult(0.0, 0.0, 0.0)
