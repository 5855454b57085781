"""Dependency-free SVG path plots.

Output uses only <line>, <circle> and <text> inside a viewBox. Elements carry
a class so plots can be inspected mechanically:

* ``vine-row``      background row centerlines
* ``path-row``      a path segment running along a row
* ``path-headland`` a path segment running along a headland
* ``spot``          a target marker
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import FieldGeometry, FieldPoint

SCALE = 3.0  # px per meter
MARGIN = 30.0
LEGEND_HEIGHT = 40.0


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _f(v: float) -> str:
    return f"{v:.2f}"


def classify_segment(a: tuple[float, float], b: tuple[float, float]) -> str | None:
    """'row' for along-row moves, 'headland' for across-row moves, None if degenerate."""
    if a == b:
        return None
    if a[0] == b[0]:
        return "row"
    return "headland"


def render_path_svg(field: FieldGeometry, path: Sequence[tuple[float, float]],
                    markers: Iterable[FieldPoint] = (), title: str = "",
                    path_label: str = "Path", marker_label: str = "Disease Spots") -> str:
    ox, oy = field.origin
    width_m = field.width
    height_m = float(field.row_length)
    w = width_m * SCALE + 2 * MARGIN
    h = height_m * SCALE + 2 * MARGIN + LEGEND_HEIGHT

    def px(xy):
        return (MARGIN + (xy[0] - ox) * SCALE,
                MARGIN + LEGEND_HEIGHT + (height_m - (xy[1] - oy)) * SCALE)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_f(w)} {_f(h)}">']
    if title:
        out.append(f'<text x="{_f(MARGIN)}" y="16" font-size="12" font-family="sans-serif">{_esc(title)}</text>')
    out.append(f'<text x="{_f(MARGIN)}" y="32" font-size="10" font-family="sans-serif" fill="red">'
               f'x {_esc(marker_label)}</text>')
    out.append(f'<text x="{_f(MARGIN + 120)}" y="32" font-size="10" font-family="sans-serif">'
               f'— {_esc(path_label)}</text>')

    for r in range(field.num_rows):
        x1, y1 = px(field.to_cartesian(FieldPoint(r, 0.0)))
        x2, y2 = px(field.to_cartesian(FieldPoint(r, height_m)))
        out.append(f'<line class="vine-row" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                   f'stroke="#3b6fd8" stroke-width="0.6"/>')

    for a, b in zip(path, path[1:]):
        kind = classify_segment(a, b)
        if kind is None:
            continue
        (x1, y1), (x2, y2) = px(a), px(b)
        out.append(f'<line class="path-{kind}" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                   f'stroke="black" stroke-width="1.2"/>')

    for p in markers:
        cx, cy = px(field.to_cartesian(p))
        out.append(f'<circle class="spot" cx="{_f(cx)}" cy="{_f(cy)}" r="2.5" fill="red"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
