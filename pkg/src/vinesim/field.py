"""Vineyard geometry, infected-spot generation and yield-map zones.

Coordinate conventions
----------------------
A field point is ``(row, x)``: a 0-based row index and a position in meters
along that row, measured from the row's start headland (x = 0). The far
headland sits at ``x = row_length``.

Cartesian coordinates are in meters with X running across the rows (east)
and Y running along them (north)::

    (X, Y) = origin + (row * row_spacing, x)

Yield grids are laid over the same frame. ``grid_origin`` is the south-west
corner of the grid; grid row 0 is the northernmost row of cells.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import ndimage

from .errors import InputFormatError, InvalidGeometryError

TEN_ACRES_M2 = 40_468.6


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Difficulty(enum.Enum):
    EASY = "easy"
    DIFFICULT = "difficult"


@dataclass(frozen=True)
class FieldGeometry:
    num_rows: int
    row_length: float
    row_spacing: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not isinstance(self.num_rows, (int, np.integer)) or self.num_rows < 1:
            raise InvalidGeometryError(f"num_rows must be a positive integer, got {self.num_rows!r}")
        if not self.row_length > 0:
            raise InvalidGeometryError(f"row_length must be positive, got {self.row_length!r}")
        if not self.row_spacing > 0:
            raise InvalidGeometryError(f"row_spacing must be positive, got {self.row_spacing!r}")

    @property
    def area(self) -> float:
        return self.num_rows * self.row_length * self.row_spacing

    @property
    def metadata(self) -> dict:
        return {
            "area_m2": self.area,
            "area_acres": self.area / (TEN_ACRES_M2 / 10),
            "row_meters": self.num_rows * self.row_length,
        }

    @property
    def width(self) -> float:
        """Across-row extent between the first and last row centerlines."""
        return (self.num_rows - 1) * self.row_spacing

    def contains(self, point: "FieldPoint") -> bool:
        return 0 <= point.row < self.num_rows and 0 <= point.x <= self.row_length

    def to_cartesian(self, point: "FieldPoint") -> tuple[float, float]:
        return (self.origin[0] + point.row * self.row_spacing, self.origin[1] + point.x)

    def nearest_point(self, xy: tuple[float, float]) -> "FieldPoint":
        """Snap a Cartesian position to the closest valid field point."""
        u = (xy[0] - self.origin[0]) / self.row_spacing
        row = min(max(math.floor(u + 0.5), 0), self.num_rows - 1)
        x = min(max(xy[1] - self.origin[1], 0.0), float(self.row_length))
        return FieldPoint(int(row), float(x))


@dataclass(frozen=True, order=True)
class FieldPoint:
    row: int
    x: float


@dataclass(frozen=True)
class Spot:
    location: FieldPoint
    side: Side
    difficulty: Difficulty


def build_field(num_rows: int, row_length: float, row_spacing: float,
                origin: tuple[float, float] = (0.0, 0.0)) -> FieldGeometry:
    return FieldGeometry(num_rows, row_length, row_spacing, tuple(origin))


def derived_spacing(num_rows: int, row_length: float, area_m2: float = TEN_ACRES_M2) -> float:
    """Row spacing that makes ``num_rows`` rows of ``row_length`` cover ``area_m2``."""
    if not (num_rows >= 1 and row_length > 0 and area_m2 > 0):
        raise InvalidGeometryError(
            f"cannot derive spacing for {num_rows} rows of {row_length} m over {area_m2} m2")
    return area_m2 / (num_rows * row_length)


# Spacing rounded to the millimetre from derived_spacing().
PRESETS = {
    "52x227": (52, 227.0, 3.428),
    "75x200": (75, 200.0, 2.698),
}
DEFAULT_PRESET = "52x227"


def preset_field(name: str = DEFAULT_PRESET) -> FieldGeometry:
    try:
        rows, length, spacing = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown field preset {name!r}; choose from {sorted(PRESETS)}") from None
    return build_field(rows, length, spacing)


def generate_spots(field: FieldGeometry, n: int, p_difficult: float = 0.5,
                   seed=None) -> list[Spot]:
    """Draw ``n`` infected spots uniformly over the field.

    ``seed`` is anything ``numpy.random.default_rng`` accepts (an int or a
    ``SeedSequence``). The same arguments always give the same spots.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not 0.0 <= p_difficult <= 1.0:
        raise ValueError(f"p_difficult must lie in [0, 1], got {p_difficult}")
    if n == 0:
        return []
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, field.num_rows, size=n)
    xs = rng.uniform(0.0, field.row_length, size=n)
    sides = rng.integers(0, 2, size=n)
    hard = rng.random(size=n) < p_difficult
    return [
        Spot(FieldPoint(int(r), float(x)),
             Side.LEFT if s == 0 else Side.RIGHT,
             Difficulty.DIFFICULT if h else Difficulty.EASY)
        for r, x, s, h in zip(rows, xs, sides, hard)
    ]


# --------------------------------------------------------------------------
# Yield maps

@dataclass(frozen=True)
class YieldMap:
    cell_size: float
    grid: np.ndarray = field(repr=False)
    grid_origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.cell_size > 0:
            raise InputFormatError(f"cell_size must be positive, got {self.cell_size!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 2 or grid.size == 0:
            raise InputFormatError("yield grid must be a non-empty 2-D array")
        if not np.all(np.isfinite(grid)):
            raise InputFormatError("yield grid contains non-finite values")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    def cell_center(self, i: float, j: float) -> tuple[float, float]:
        """Cartesian center of grid cell (i, j); fractional indices allowed."""
        n_rows = self.grid.shape[0]
        return (self.grid_origin[0] + (j + 0.5) * self.cell_size,
                self.grid_origin[1] + (n_rows - i - 0.5) * self.cell_size)


def map_yield_classes(ymap: YieldMap, table: dict[float, float]) -> YieldMap:
    """Replace every class label in ``ymap`` with its value from ``table``.

    Labels missing from the table are an input-format error; there is no
    fallback value.
    """
    labels = np.unique(ymap.grid)
    missing = [float(v) for v in labels if float(v) not in table]
    if missing:
        raise InputFormatError(f"yield classes {missing} have no entry in the class table")
    out = np.empty_like(ymap.grid)
    for label in labels:
        out[ymap.grid == label] = table[float(label)]
    return YieldMap(ymap.cell_size, out, ymap.grid_origin)


@dataclass(frozen=True)
class ZoneEpicenter:
    id: int
    center: FieldPoint
    cell_count: int


def parse_yield_csv(text: str, cell_size: float | None = None,
                    grid_origin: tuple[float, float] = (0.0, 0.0)) -> YieldMap:
    lines = text.splitlines()
    values = []
    width = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            if key.strip() == "cell_size":
                try:
                    cell_size = float(val)
                except ValueError:
                    raise InputFormatError(f"bad cell_size header {val.strip()!r}", line=lineno) from None
            continue
        cells = line.split(",")
        row = []
        for col, cell in enumerate(cells, start=1):
            try:
                row.append(float(cell))
            except ValueError:
                raise InputFormatError(f"unparseable cell {cell.strip()!r}", line=lineno, column=col) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputFormatError(
                f"grid row {len(values)} has {len(row)} cells, expected {width}", line=lineno)
        values.append(row)
    if not values:
        raise InputFormatError("yield file contains no grid rows")
    if cell_size is None or not cell_size > 0:
        raise InputFormatError(f"cell_size must be positive, got {cell_size!r}")
    return YieldMap(float(cell_size), np.array(values), tuple(grid_origin))


def load_yield_map(source, cell_size: float | None = None,
                   grid_origin: tuple[float, float] = (0.0, 0.0)) -> YieldMap:
    """Read a yield grid CSV. A ``#cell_size=<m>`` header overrides ``cell_size``."""
    text = Path(source).read_text()
    return parse_yield_csv(text, cell_size, grid_origin)


_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


def extract_low_yield_zones(ymap: YieldMap, threshold: float, field: FieldGeometry,
                            connectivity: int = 4) -> list[ZoneEpicenter]:
    """Group cells with yield <= threshold into connected zones.

    Each zone's epicenter is the centroid of its member cell centers, snapped
    to the nearest field point. Zones come back sorted by epicenter (row, x).
    """
    if connectivity not in _STRUCTURES:
        raise ValueError("connectivity must be 4 or 8")
    mask = ymap.grid <= threshold
    labels, count = ndimage.label(mask, structure=_STRUCTURES[connectivity])
    found = []
    for label in range(1, count + 1):
        ii, jj = np.nonzero(labels == label)
        xy = ymap.cell_center(float(ii.mean()), float(jj.mean()))
        found.append((field.nearest_point(xy), len(ii)))
    found.sort(key=lambda item: (item[0].row, item[0].x))
    return [ZoneEpicenter(k, pt, n) for k, (pt, n) in enumerate(found)]


def zone_spots(zones: Sequence[ZoneEpicenter]) -> list[Spot]:
    """Survey targets for zone epicenters; surveys charge the Easy-spot time."""
    return [Spot(z.center, Side.LEFT, Difficulty.EASY) for z in zones]
