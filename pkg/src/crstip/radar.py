"""Deterministic SVG radar charts for one or two level profiles.

Geometry is fixed: a 400x400 canvas, center (200,200), full radius 160.
Axis i of N sits at 90 degrees minus i*360/N, so the first axis points up
and the rest follow clockwise.  A value v on an axis is drawn at radius
v/max_rank*160; the center represents rank 0, which keeps rank 1 visibly
off-center.  Identical specs produce byte-identical documents: every
coordinate is formatted with exactly two decimals and nothing in the
output depends on time or randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import InvalidSpec

CANVAS = 400
CENTER = 200.0
RADIUS = 160.0

_SERIES_STYLE = (
    {"color": "#2f6db3", "fill_opacity": "0.20", "dash": None},
    {"color": "#c4552d", "fill_opacity": "0.12", "dash": "7 4"},
)


@dataclass(frozen=True)
class Series:
    name: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ChartSpec:
    axes: tuple[str, ...]
    max_rank: int
    series: tuple[Series, ...]


def chart_spec(axes, max_rank, series) -> ChartSpec:
    """Build a ChartSpec from plain sequences, e.g. parsed request JSON."""
    return ChartSpec(
        axes=tuple(axes),
        max_rank=max_rank,
        series=tuple(
            Series(name=entry[0], values=tuple(entry[1])) for entry in series
        ),
    )


def _validate(spec: ChartSpec) -> None:
    if not spec.axes:
        raise InvalidSpec("chart needs at least one axis")
    if not isinstance(spec.max_rank, int) or spec.max_rank < 1:
        raise InvalidSpec(f"max_rank must be a positive integer, got {spec.max_rank!r}")
    if not 1 <= len(spec.series) <= 2:
        raise InvalidSpec(f"chart takes 1 or 2 series, got {len(spec.series)}")
    for series in spec.series:
        if len(series.values) != len(spec.axes):
            raise InvalidSpec(
                f"series {series.name!r} has {len(series.values)} values"
                f" for {len(spec.axes)} axes"
            )
        for value in series.values:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidSpec(f"series {series.name!r} has non-numeric value {value!r}")
            if not 1 <= value <= spec.max_rank:
                raise InvalidSpec(
                    f"series {series.name!r} value {value} is outside 1..{spec.max_rank}"
                )


def _fmt(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def _point(axis_index: int, axis_count: int, radius: float) -> tuple[str, str]:
    theta = math.radians(90.0 - axis_index * 360.0 / axis_count)
    return (
        _fmt(CENTER + radius * math.cos(theta)),
        _fmt(CENTER - radius * math.sin(theta)),
    )


def render_radar(spec: ChartSpec) -> str:
    """Render the chart as an SVG 1.1 document (UTF-8 text)."""
    _validate(spec)
    count = len(spec.axes)
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="400" height="400"'
        ' viewBox="0 0 400 400" font-family="sans-serif">',
        '<rect width="400" height="400" fill="#ffffff"/>',
    ]

    lines.append('<g fill="none" stroke="#cccccc" stroke-width="1">')
    for rank in range(1, spec.max_rank + 1):
        radius = _fmt(rank / spec.max_rank * RADIUS)
        lines.append(f'<circle cx="200.00" cy="200.00" r="{radius}"/>')
    lines.append("</g>")

    lines.append('<g stroke="#999999" stroke-width="1">')
    for idx in range(count):
        x, y = _point(idx, count, RADIUS)
        lines.append(f'<line x1="200.00" y1="200.00" x2="{x}" y2="{y}"/>')
    lines.append("</g>")

    lines.append('<g fill="#888888" font-size="10">')
    for rank in range(1, spec.max_rank + 1):
        y = _fmt(CENTER - rank / spec.max_rank * RADIUS + 4.0)
        lines.append(f'<text x="204.00" y="{y}">{rank}</text>')
    lines.append("</g>")

    lines.append('<g fill="#333333" font-size="13">')
    for idx, name in enumerate(spec.axes):
        theta = math.radians(90.0 - idx * 360.0 / count)
        cos_t = math.cos(theta)
        anchor = "middle" if abs(cos_t) < 0.01 else ("start" if cos_t > 0 else "end")
        x = _fmt(CENTER + (RADIUS + 14.0) * cos_t)
        y = _fmt(CENTER - (RADIUS + 14.0) * math.sin(theta) + 4.0)
        lines.append(f'<text x="{x}" y="{y}" text-anchor="{anchor}">{escape(name)}</text>')
    lines.append("</g>")

    for s_idx, series in enumerate(spec.series):
        style = _SERIES_STYLE[s_idx]
        points = " ".join(
            ",".join(_point(idx, count, value / spec.max_rank * RADIUS))
            for idx, value in enumerate(series.values)
        )
        dash = f' stroke-dasharray="{style["dash"]}"' if style["dash"] else ""
        lines.append(
            f'<polygon points="{points}" fill="{style["color"]}"'
            f' fill-opacity="{style["fill_opacity"]}" stroke="{style["color"]}"'
            f' stroke-width="2"{dash}/>'
        )

    lines.append('<g font-size="12">')
    for s_idx, series in enumerate(spec.series):
        style = _SERIES_STYLE[s_idx]
        y = 16.0 + 16.0 * s_idx
        dash = f' stroke-dasharray="{style["dash"]}"' if style["dash"] else ""
        lines.append(
            f'<line x1="10.00" y1="{_fmt(y)}" x2="34.00" y2="{_fmt(y)}"'
            f' stroke="{style["color"]}" stroke-width="2"{dash}/>'
        )
        lines.append(
            f'<text x="40.00" y="{_fmt(y + 4.0)}" fill="#333333">{escape(series.name)}</text>'
        )
    lines.append("</g>")

    lines.append("</svg>")
    return "\n".join(lines) + "\n"
