"""CSV readers and writers.

Floats are written with ``repr`` (shortest round-trip form), so parsing a
file gives back exactly the values that were written.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputFormatError
from .experiment import StatRow, Table
from .field import Difficulty, FieldGeometry, FieldPoint, Side, Spot
from .phases import Leg
from .results import PhaseResult

STATS_COLUMNS = ["agent", "scenario_spots", "phase", "mean_s", "std_s", "min_s", "max_s",
                 "pct_diff_vs_human"]
ROUTE_COLUMNS = ["leg_index", "from_row", "from_x_m", "to_row", "to_x_m", "leg_distance_m",
                 "cumulative_s"]
SPOT_COLUMNS = ["row", "x_m", "side", "difficulty"]
PHASE_COLUMNS = ["agent", "phase", "spots", "distance_m", "transitions", "travel_s", "service_s",
                 "transition_s", "total_s"]
COMPARISON_COLUMNS = ["mode", "agent", "zone_count", "distance_m", "travel_s", "service_s",
                      "transition_s", "total_s", "pct_diff_vs_full_coverage"]


def fmt(v: float) -> str:
    if isinstance(v, float) and math.isnan(v):
        return ""
    return repr(float(v))


def parse_float(text: str) -> float:
    return math.nan if text == "" else float(text)


def _write(path: Path | None, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def _read(path, expected: Sequence[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or list(reader.fieldnames) != list(expected):
            raise InputFormatError(f"expected columns {','.join(expected)}, got {reader.fieldnames}", line=1)
        return list(reader)


# -- stats --------------------------------------------------------------------

def write_stats_csv(path, rows: Sequence[StatRow]) -> str:
    return _write(path, STATS_COLUMNS, (
        [r.agent, r.scenario_spots, r.phase, fmt(r.mean_s), fmt(r.std_s), fmt(r.min_s),
         fmt(r.max_s), fmt(r.pct_diff_vs_human)] for r in rows))


def read_stats_csv(path) -> list[StatRow]:
    return [StatRow(d["agent"], int(d["scenario_spots"]), d["phase"], float(d["mean_s"]),
                    float(d["std_s"]), float(d["min_s"]), float(d["max_s"]),
                    parse_float(d["pct_diff_vs_human"]))
            for d in _read(path, STATS_COLUMNS)]


# -- routes -------------------------------------------------------------------

def leg_rows(legs: Sequence[Leg], transition_time: float, speed: float) -> list[list]:
    rows = []
    elapsed = 0.0
    for k, leg in enumerate(legs):
        elapsed += leg.distance / speed + leg.transitions * transition_time + leg.service_time
        rows.append([k, leg.start.row, fmt(leg.start.x), leg.end.row, fmt(leg.end.x),
                     fmt(leg.distance), fmt(elapsed)])
    return rows


def write_route_csv(path, legs: Sequence[Leg], transition_time: float, speed: float) -> str:
    """Leg-by-leg route. ``cumulative_s`` is the elapsed time once the leg's
    destination has been serviced."""
    return _write(path, ROUTE_COLUMNS, leg_rows(legs, transition_time, speed))


def read_route_csv(path) -> list[dict]:
    out = []
    for d in _read(path, ROUTE_COLUMNS):
        out.append({"leg_index": int(d["leg_index"]), "from_row": int(d["from_row"]),
                    "from_x_m": float(d["from_x_m"]), "to_row": int(d["to_row"]),
                    "to_x_m": float(d["to_x_m"]), "leg_distance_m": float(d["leg_distance_m"]),
                    "cumulative_s": float(d["cumulative_s"])})
    return out


# -- recorded spots -----------------------------------------------------------

def write_spots_csv(path, spots: Sequence[Spot]) -> str:
    return _write(path, SPOT_COLUMNS, ([s.location.row, fmt(s.location.x), s.side.value,
                                        s.difficulty.value] for s in spots))


def read_spots_csv(path, field: FieldGeometry | None = None) -> list[Spot]:
    text = Path(path).read_text()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputFormatError("recorded-spots file is empty", line=1) from None
    if [h.strip() for h in header] != SPOT_COLUMNS:
        raise InputFormatError(f"expected header {','.join(SPOT_COLUMNS)}", line=1)
    spots = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not c.strip() for c in rec):
            continue
        if len(rec) != len(SPOT_COLUMNS):
            raise InputFormatError(f"expected {len(SPOT_COLUMNS)} fields, got {len(rec)}", line=lineno)
        try:
            row = int(rec[0])
        except ValueError:
            raise InputFormatError(f"bad row {rec[0]!r}", line=lineno, column=1) from None
        try:
            x = float(rec[1])
        except ValueError:
            raise InputFormatError(f"bad x_m {rec[1]!r}", line=lineno, column=2) from None
        try:
            side = Side(rec[2].strip().lower())
        except ValueError:
            raise InputFormatError(f"bad side {rec[2]!r}", line=lineno, column=3) from None
        try:
            diff = Difficulty(rec[3].strip().lower())
        except ValueError:
            raise InputFormatError(f"bad difficulty {rec[3]!r}", line=lineno, column=4) from None
        point = FieldPoint(row, x)
        if field is not None and not field.contains(point):
            raise InputFormatError(f"spot {point} lies outside the field", line=lineno)
        spots.append(Spot(point, side, diff))
    return spots


# -- phase summaries ----------------------------------------------------------

def phase_row(agent: str, phase: str, result: PhaseResult) -> list:
    return [agent, phase, len(result.visited_spots), fmt(result.distance), result.transitions,
            fmt(result.travel_time), fmt(result.service_time), fmt(result.transition_time),
            fmt(result.total_time)]


def write_phase_csv(path, rows: Sequence[Sequence]) -> str:
    return _write(path, PHASE_COLUMNS, rows)


def write_comparison_csv(path, records: Sequence[dict]) -> str:
    return _write(path, COMPARISON_COLUMNS, (
        [r["mode"], r["agent"], r["zone_count"], fmt(r["distance_m"]), fmt(r["travel_s"]),
         fmt(r["service_s"]), fmt(r["transition_s"]), fmt(r["total_s"]),
         fmt(r["pct_diff_vs_full_coverage"])] for r in records))


def read_comparison_csv(path) -> list[dict]:
    out = []
    for d in _read(path, COMPARISON_COLUMNS):
        rec = {"mode": d["mode"], "agent": d["agent"], "zone_count": int(d["zone_count"])}
        for k in COMPARISON_COLUMNS[3:]:
            rec[k] = parse_float(d[k])
        out.append(rec)
    return out


def write_table_csv(path, table: Table) -> str:
    return _write(path, table.headers, table.rows)


def render_table_text(table: Table) -> str:
    widths = [max(len(h), *(len(r[i]) for r in table.rows)) if table.rows else len(h)
              for i, h in enumerate(table.headers)]
    lines = [table.title,
             "  ".join(h.ljust(w) for h, w in zip(table.headers, widths)),
             "  ".join("-" * w for w in widths)]
    for r in table.rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(lines) + "\n"
