"""Phase simulations: serpentine scanning, treatment and yield surveys.

Every phase starts at (row 0, x 0). Scans cover rows in index order and
alternate direction (single pass) or drive each row out and back (double
pass). Headland crossings between rows are charged as row-transition time,
not as travel distance; targeted tours instead pay the crossing distance
through the row metric and one transition per row-changing leg.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import replace
from typing import NamedTuple, Sequence

from .agents import AgentProfile, service_time
from .errors import MisuseError
from .field import FieldGeometry, FieldPoint, Side, Spot, ZoneEpicenter, zone_spots
from .results import EMPTY_PHASE, PhaseResult
from .routing import Route, plan_route, route_time

DEPOT = FieldPoint(0, 0.0)


class SurveyMode(enum.Enum):
    FULL_COVERAGE = "full_coverage"
    TARGETED = "targeted"


def _spots_by_row(spots: Sequence[Spot]) -> dict[int, list[Spot]]:
    by_row = defaultdict(list)
    for s in spots:
        by_row[s.location.row].append(s)
    return by_row


def _coverage(field: FieldGeometry, profile: AgentProfile, spots: Sequence[Spot],
              passes: int) -> PhaseResult:
    R, L = field.num_rows, float(field.row_length)
    by_row = _spots_by_row(spots)
    path = []
    visited = []
    for r in range(R):
        row_spots = by_row.get(r, [])
        ascending = sorted(row_spots, key=lambda s: s.location.x)
        if passes == 1:
            forward = r % 2 == 0
            ends = (0.0, L) if forward else (L, 0.0)
            visited.extend(ascending if forward else ascending[::-1])
        else:
            ends = (0.0, L, 0.0)
            visited.extend(s for s in ascending if s.side is Side.LEFT)
            visited.extend(s for s in ascending[::-1] if s.side is Side.RIGHT)
        path.extend(field.to_cartesian(FieldPoint(r, x)) for x in ends)

    distance = (passes * R) * L
    transitions = (R - 1) + (R if passes == 2 else 0)
    service = 0.0
    for s in visited:
        service += service_time(profile, s.difficulty)
    return PhaseResult(
        travel_time=distance / profile.speed,
        service_time=service,
        transition_time=transitions * profile.row_transition_time,
        path=tuple(path),
        visited_spots=tuple(visited),
        distance=distance,
        transitions=transitions,
    )


def simulate_scan(field: FieldGeometry, profile: AgentProfile, spots: Sequence[Spot]) -> PhaseResult:
    """Detection pass: cover every row per the agent's scan strategy.

    Detection is perfect, so every spot is serviced exactly once. Agents with
    memory hand the recorded coordinates on to treatment.
    """
    result = _coverage(field, profile, spots, profile.scan_strategy.passes_per_row)
    if profile.has_memory:
        result = replace(result, provides_coordinates=True)
    return result


def simulate_treatment_full_rescan(field: FieldGeometry, profile: AgentProfile,
                                   spots: Sequence[Spot]) -> PhaseResult:
    if profile.has_memory:
        raise MisuseError(f"{profile.name} stores spot coordinates; use targeted treatment")
    return _coverage(field, profile, spots, profile.scan_strategy.passes_per_row)


def _targeted(field: FieldGeometry, profile: AgentProfile, spots: Sequence[Spot],
              planner: str) -> PhaseResult:
    if not spots:
        return EMPTY_PHASE
    at_point = defaultdict(list)
    for s in spots:
        at_point[s.location].append(s)
    route = targeted_route(field, spots, planner)
    service = {p: [s.difficulty for s in group] for p, group in at_point.items()}
    result = route_time(field, profile, route, service)
    visited = tuple(s for p in route.visits for s in at_point[p])
    return replace(result, visited_spots=visited)


def targeted_route(field: FieldGeometry, spots: Sequence[Spot], planner: str = "nn2opt") -> Route:
    """Open tour from the depot over the distinct spot locations."""
    return plan_route(field, DEPOT, {s.location for s in spots}, planner)


def simulate_treatment_targeted(field: FieldGeometry, profile: AgentProfile,
                                recorded: Sequence[Spot], planner: str = "nn2opt") -> PhaseResult:
    """Spray only the recorded spots along a planned open tour from the depot."""
    if not profile.has_memory:
        raise MisuseError(f"{profile.name} has no spot memory; use full rescan")
    return _targeted(field, profile, recorded, planner)


def simulate_treatment(field: FieldGeometry, profile: AgentProfile, spots: Sequence[Spot],
                       planner: str = "nn2opt") -> PhaseResult:
    """Second round with whichever model fits the agent."""
    if profile.has_memory:
        return simulate_treatment_targeted(field, profile, spots, planner)
    return simulate_treatment_full_rescan(field, profile, spots)


def simulate_yield_survey(field: FieldGeometry, profile: AgentProfile,
                          zones: Sequence[ZoneEpicenter], mode: SurveyMode,
                          planner: str = "nn2opt") -> PhaseResult:
    """Survey low-yield zone epicenters, each charged the Easy-spot time.

    Full coverage drives a single serpentine over the whole field; targeted
    mode tours only the epicenters.
    """
    targets = zone_spots(zones)
    if SurveyMode(mode) is SurveyMode.FULL_COVERAGE:
        return _coverage(field, profile, targets, 1)
    return _targeted(field, profile, targets, planner)



class Leg(NamedTuple):
    start: FieldPoint
    end: FieldPoint
    distance: float
    transitions: int
    service_time: float


def _arc_position(field: FieldGeometry, spot: Spot, passes: int) -> tuple[float, int]:
    """Distance along a coverage path to ``spot``, and transitions made before it."""
    r, x, L = spot.location.row, spot.location.x, float(field.row_length)
    if passes == 1:
        return r * L + (x if r % 2 == 0 else L - x), r
    if spot.side is Side.LEFT:
        return 2 * r * L + x, 2 * r
    return 2 * r * L + (2 * L - x), 2 * r + 1


def coverage_legs(field: FieldGeometry, profile: AgentProfile, result: PhaseResult,
                  passes: int | None = None) -> list[Leg]:
    """Split a coverage result into legs between consecutive serviced spots.

    A final leg without service runs from the last spot to the end of the
    coverage path, so leg distances sum to the full coverage distance.
    """
    if passes is None:
        passes = profile.scan_strategy.passes_per_row
    R, L = field.num_rows, float(field.row_length)
    legs = []
    prev_pt, prev_pos, prev_tr = DEPOT, 0.0, 0
    for s in result.visited_spots:
        pos, tr = _arc_position(field, s, passes)
        legs.append(Leg(prev_pt, s.location, pos - prev_pos, tr - prev_tr,
                        service_time(profile, s.difficulty)))
        prev_pt, prev_pos, prev_tr = s.location, pos, tr
    end_x = 0.0 if passes == 2 or (R - 1) % 2 == 1 else L
    legs.append(Leg(prev_pt, FieldPoint(R - 1, end_x), result.distance - prev_pos,
                    result.transitions - prev_tr, 0.0))
    return legs


def route_legs(field: FieldGeometry, profile: AgentProfile, route: Route,
               spots: Sequence[Spot]) -> list[Leg]:
    at_point = defaultdict(float)
    for s in spots:
        at_point[s.location] += service_time(profile, s.difficulty)
    legs = []
    prev = route.start
    for v, d in zip(route.visits, route.leg_distances):
        legs.append(Leg(prev, v, d, int(v.row != prev.row), at_point[v]))
        prev = v
    return legs
