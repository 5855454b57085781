"""Row-constrained distances and open-tour planning.

Agents can only move along a row or along one of the two headlands
(x = 0 and x = row_length). Moving between rows therefore means driving to a
headland, across, and back into the target row. Tours start at a depot and
end at their last visit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .agents import AgentProfile, service_time
from .errors import DomainError, SizeLimitError
from .field import Difficulty, FieldGeometry, FieldPoint
from .results import PhaseResult

EXACT_LIMIT = 10
# 2-opt only accepts moves that shorten the tour by more than this (meters)
IMPROVEMENT_EPS = 1e-9

PLANNERS = ("nn", "nn2opt", "exact")


@dataclass(frozen=True)
class Route:
    start: FieldPoint
    visits: tuple[FieldPoint, ...]
    leg_distances: tuple[float, ...]
    total_distance: float

    @property
    def points(self) -> tuple[FieldPoint, ...]:
        return (self.start,) + self.visits


def _check(field: FieldGeometry, p: FieldPoint):
    if not field.contains(p):
        raise DomainError(f"{p} lies outside the field "
                          f"({field.num_rows} rows x {field.row_length} m)")


def _headland_legs(field: FieldGeometry, a: FieldPoint, b: FieldPoint) -> tuple[float, float]:
    # x-terms are paired before adding the crossing so the result is symmetric in (a, b)
    cross = abs(a.row - b.row) * field.row_spacing
    L = field.row_length
    via_start = (a.x + b.x) + cross
    via_end = ((L - a.x) + (L - b.x)) + cross
    return via_start, via_end


def row_distance(field: FieldGeometry, a: FieldPoint, b: FieldPoint) -> float:
    """Shortest travel distance from ``a`` to ``b`` under row/headland movement."""
    _check(field, a)
    _check(field, b)
    if a.row == b.row:
        return abs(a.x - b.x)
    return min(_headland_legs(field, a, b))


def distance_matrix(field: FieldGeometry, points: Sequence[FieldPoint]) -> np.ndarray:
    """Pairwise row_distance over ``points``; matches row_distance bit for bit."""
    rows = np.array([p.row for p in points], dtype=np.int64)
    xs = np.array([p.x for p in points], dtype=float)
    L = float(field.row_length)
    cross = np.abs(rows[:, None] - rows[None, :]).astype(float) * field.row_spacing
    via_start = (xs[:, None] + xs[None, :]) + cross
    via_end = ((L - xs)[:, None] + (L - xs)[None, :]) + cross
    same = rows[:, None] == rows[None, :]
    return np.where(same, np.abs(xs[:, None] - xs[None, :]), np.minimum(via_start, via_end))


def _targets(field: FieldGeometry, start: FieldPoint, targets: Iterable[FieldPoint]) -> list[FieldPoint]:
    _check(field, start)
    pts = sorted(set(targets))
    for p in pts:
        _check(field, p)
    return pts


def _route_from_order(points: Sequence[FieldPoint], order: Sequence[int], D: np.ndarray) -> Route:
    legs = []
    prev = 0
    for k in order:
        legs.append(float(D[prev, k]))
        prev = k
    total = 0.0
    for d in legs:
        total += d
    return Route(points[0], tuple(points[k] for k in order), tuple(legs), total)


def plan_route_nearest_neighbor(field: FieldGeometry, start: FieldPoint,
                                targets: Iterable[FieldPoint]) -> Route:
    pts = [start] + _targets(field, start, targets)
    D = distance_matrix(field, pts)
    # pts[1:] is sorted by (row, x), so the lowest index wins a distance tie
    unvisited = list(range(1, len(pts)))
    order = []
    cur = 0
    while unvisited:
        nxt = min(unvisited, key=lambda k: (D[cur, k], k))
        unvisited.remove(nxt)
        order.append(nxt)
        cur = nxt
    return _route_from_order(pts, order, D)


def two_opt_moves(D: np.ndarray, tour: Sequence[int]):
    """Yield (i, j, delta) for every reversal of tour[i:j+1], 1 <= i < j."""
    last = len(tour) - 1
    for i in range(1, last):
        a, b = tour[i - 1], tour[i]
        d_ab = D[a, b]
        for j in range(i + 1, last + 1):
            c = tour[j]
            if j < last:
                d = tour[j + 1]
                delta = (D[a, c] + D[b, d]) - (d_ab + D[c, d])
            else:
                delta = D[a, c] - d_ab
            yield i, j, delta


def _first_improving_move(D: np.ndarray, tour: np.ndarray):
    """First (i, j) in scan order whose reversal beats IMPROVEMENT_EPS, else None.

    Same order and deltas as two_opt_moves, evaluated one i at a time.
    """
    last = len(tour) - 1
    for i in range(1, last):
        a, b = tour[i - 1], tour[i]
        c = tour[i + 1:]
        d = tour[i + 2:]
        delta = D[a, c] - D[a, b]
        delta[:-1] = (D[a, c[:-1]] + D[b, d]) - (D[a, b] + D[c[:-1], d])
        hits = np.flatnonzero(delta < -IMPROVEMENT_EPS)
        if hits.size:
            return i, i + 1 + int(hits[0])
    return None


def improve_route_2opt(field: FieldGeometry, route: Route) -> Route:
    """First-improvement 2-opt on an open tour with a fixed start.

    Moves are scanned in (i, j) order and the first improving reversal is
    applied before scanning again from the top.
    """
    pts = list(route.points)
    D = distance_matrix(field, pts)
    tour = np.arange(len(pts))
    changed = False
    while (move := _first_improving_move(D, tour)) is not None:
        i, j = move
        tour[i:j + 1] = tour[i:j + 1][::-1].copy()
        changed = True
    if not changed:
        return route
    return _route_from_order(pts, [int(k) for k in tour[1:]], D)


def plan_route_exact(field: FieldGeometry, start: FieldPoint,
                     targets: Iterable[FieldPoint]) -> Route:
    """Minimum-length open tour by exhaustive search.

    Orders are explored lexicographically by (row, x) of the visits and only
    strictly shorter tours replace the incumbent, so ties resolve to the
    lexicographically first order. Branches whose partial length already
    reaches the incumbent cannot win and are skipped.
    """
    pts = [start] + _targets(field, start, targets)
    n = len(pts) - 1
    if n > EXACT_LIMIT:
        raise SizeLimitError(f"exact planner handles at most {EXACT_LIMIT} targets, got {n}")
    D = distance_matrix(field, pts).tolist()
    best_len = float("inf")
    best_order: list[int] = []
    order: list[int] = []
    used = [False] * (n + 1)

    def search(cur, length):
        nonlocal best_len, best_order
        if len(order) == n:
            if length < best_len:
                best_len = length
                best_order = list(order)
            return
        for k in range(1, n + 1):
            if used[k]:
                continue
            nl = length + D[cur][k]
            if nl >= best_len:
                continue
            used[k] = True
            order.append(k)
            search(k, nl)
            order.pop()
            used[k] = False

    search(0, 0.0)
    return _route_from_order(pts, best_order, np.asarray(D))


def plan_route(field: FieldGeometry, start: FieldPoint, targets: Iterable[FieldPoint],
               planner: str = "nn2opt") -> Route:
    if planner == "nn":
        return plan_route_nearest_neighbor(field, start, targets)
    if planner == "nn2opt":
        return improve_route_2opt(field, plan_route_nearest_neighbor(field, start, targets))
    if planner == "exact":
        return plan_route_exact(field, start, targets)
    raise ValueError(f"unknown planner {planner!r}; choose from {PLANNERS}")


def leg_polyline(field: FieldGeometry, a: FieldPoint, b: FieldPoint) -> list[FieldPoint]:
    """Waypoints of the shortest row/headland path from a to b (a included)."""
    if a.row == b.row:
        return [a, b]
    via_start, via_end = _headland_legs(field, a, b)
    h = 0.0 if via_start <= via_end else float(field.row_length)
    return [a, FieldPoint(a.row, h), FieldPoint(b.row, h), b]


def route_polyline(field: FieldGeometry, route: Route) -> list[tuple[float, float]]:
    pts = [field.to_cartesian(route.start)]
    prev = route.start
    for v in route.visits:
        for wp in leg_polyline(field, prev, v)[1:]:
            xy = field.to_cartesian(wp)
            if xy != pts[-1]:
                pts.append(xy)
        prev = v
    return pts


def _difficulties(entry) -> Sequence[Difficulty]:
    if isinstance(entry, Difficulty):
        return (entry,)
    return tuple(entry)


def route_time(field: FieldGeometry, profile: AgentProfile, route: Route,
               service: Mapping[FieldPoint, Difficulty | Sequence[Difficulty]]) -> PhaseResult:
    """Time an agent needs to drive ``route`` and service every visit.

    ``service`` maps each visited point to its difficulty, or to several
    difficulties when more than one spot shares the point. A leg that ends on
    a different row than it started costs one row transition.
    """
    service_total = 0.0
    transitions = 0
    prev = route.start
    for v in route.visits:
        if v not in service:
            raise DomainError(f"no service entry for visit {v}")
        for diff in _difficulties(service[v]):
            service_total += service_time(profile, diff)
        if v.row != prev.row:
            transitions += 1
        prev = v
    return PhaseResult(
        travel_time=route.total_distance / profile.speed,
        service_time=service_total,
        transition_time=transitions * profile.row_transition_time,
        path=tuple(route_polyline(field, route)) if route.visits else (),
        distance=route.total_distance,
        transitions=transitions,
    )
