"""Static SVG 1.1 export of chart specs.

Purely a drawing of the numbers already fixed in the spec: scales,
wedge angles, rectangle and circle geometry all come from the spec or
from the fixed canvas constants, so equal specs render to identical
bytes. Interactivity is the UI's job, not this module's.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

from .charts import ChartKind, ChartSpec

WIDTH = 720.0
HEIGHT = 440.0
MARGIN_LEFT = 64.0
MARGIN_RIGHT = 180.0  # room for the legend
MARGIN_TOP = 48.0
MARGIN_BOTTOM = 52.0

AXIS_COLOR = "#444444"
GRID_COLOR = "#dddddd"
TEXT_COLOR = "#222222"
FONT = "font-family=\"sans-serif\""


def _f(value: float) -> str:
    return f"{value:.2f}"


def _text(x: float, y: float, content: str, size: float = 12.0, anchor: str = "start",
          color: str = TEXT_COLOR, extra: str = "") -> str:
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" font-size="{_f(size)}" fill="{color}" '
        f'text-anchor="{anchor}" {FONT}{extra}>{escape(content)}</text>'
    )


def _plot_area() -> tuple[float, float, float, float]:
    return (
        MARGIN_LEFT,
        MARGIN_TOP,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
    )


def _legend(spec: ChartSpec, entries: list[tuple[str, str]]) -> list[str]:
    x = WIDTH - MARGIN_RIGHT + 16.0
    parts = []
    for index, (label, color) in enumerate(entries):
        y = MARGIN_TOP + index * 18.0
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="12" height="12" fill="{color}"/>'
        )
        parts.append(_text(x + 18.0, y + 10.0, label, size=11.0))
    return parts


def _axes(px: float, py: float, pw: float, ph: float, max_value: float) -> list[str]:
    parts = [
        f'<line x1="{_f(px)}" y1="{_f(py + ph)}" x2="{_f(px + pw)}" y2="{_f(py + ph)}" '
        f'stroke="{AXIS_COLOR}"/>',
        f'<line x1="{_f(px)}" y1="{_f(py)}" x2="{_f(px)}" y2="{_f(py + ph)}" '
        f'stroke="{AXIS_COLOR}"/>',
    ]
    for step in range(1, 5):
        value = max_value * step / 4.0
        y = py + ph - ph * step / 4.0
        parts.append(
            f'<line x1="{_f(px)}" y1="{_f(y)}" x2="{_f(px + pw)}" y2="{_f(y)}" '
            f'stroke="{GRID_COLOR}"/>'
        )
        label = str(int(round(value))) if max_value >= 4 else f"{value:.1f}"
        parts.append(_text(px - 6.0, y + 4.0, label, size=10.0, anchor="end"))
    return parts


def _year_labels(px, py, pw, ph, years) -> list[str]:
    parts = []
    step = max(1, math.ceil(len(years) / 16))
    slot = pw / len(years)
    for index, year in enumerate(years):
        if index % step:
            continue
        x = px + slot * (index + 0.5)
        parts.append(_text(x, py + ph + 16.0, str(year), size=10.0, anchor="middle"))
    return parts


def _render_bar(spec: ChartSpec) -> list[str]:
    px, py, pw, ph = _plot_area()
    years = spec.categories_or_years
    max_value = max((v for _, values in spec.series for v in values), default=0)
    max_value = max(max_value, 1)
    parts = _axes(px, py, pw, ph, max_value)
    parts += _year_labels(px, py, pw, ph, years)
    slot = pw / len(years)
    group_width = slot * 0.8
    bar_width = group_width / len(spec.series)
    for series_index, (label, values) in enumerate(spec.series):
        color = spec.style[label]
        for index, value in enumerate(values):
            height = ph * value / max_value
            x = px + slot * index + slot * 0.1 + bar_width * series_index
            y = py + ph - height
            parts.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(bar_width)}" '
                f'height="{_f(height)}" fill="{color}"/>'
            )
    parts += _legend(spec, [(label, spec.style[label]) for label, _ in spec.series])
    return parts


def _render_line_series(spec: ChartSpec) -> list[str]:
    px, py, pw, ph = _plot_area()
    years = spec.categories_or_years
    max_value = max((v for _, values in spec.series for v in values), default=0)
    max_value = max(max_value, 1)
    parts = _axes(px, py, pw, ph, max_value)
    parts += _year_labels(px, py, pw, ph, years)
    slot = pw / len(years)
    for label, values in spec.series:
        color = spec.style[label]
        points = " ".join(
            f"{_f(px + slot * (i + 0.5))},{_f(py + ph - ph * v / max_value)}"
            for i, v in enumerate(values)
        )
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
    parts += _legend(spec, [(label, spec.style[label]) for label, _ in spec.series])
    return parts


def _wedge_path(cx, cy, r_outer, r_inner, start_deg, sweep_deg) -> str:
    # Angles measured clockwise from 12 o'clock.
    a0 = math.radians(start_deg - 90.0)
    a1 = math.radians(start_deg + sweep_deg - 90.0)
    large = 1 if sweep_deg > 180.0 else 0
    x0, y0 = cx + r_outer * math.cos(a0), cy + r_outer * math.sin(a0)
    x1, y1 = cx + r_outer * math.cos(a1), cy + r_outer * math.sin(a1)
    if r_inner <= 0:
        return (
            f"M {_f(cx)} {_f(cy)} L {_f(x0)} {_f(y0)} "
            f"A {_f(r_outer)} {_f(r_outer)} 0 {large} 1 {_f(x1)} {_f(y1)} Z"
        )
    xi1, yi1 = cx + r_inner * math.cos(a1), cy + r_inner * math.sin(a1)
    xi0, yi0 = cx + r_inner * math.cos(a0), cy + r_inner * math.sin(a0)
    return (
        f"M {_f(x0)} {_f(y0)} "
        f"A {_f(r_outer)} {_f(r_outer)} 0 {large} 1 {_f(x1)} {_f(y1)} "
        f"L {_f(xi1)} {_f(yi1)} "
        f"A {_f(r_inner)} {_f(r_inner)} 0 {large} 0 {_f(xi0)} {_f(yi0)} Z"
    )


def _render_pie(spec: ChartSpec) -> list[str]:
    px, py, pw, ph = _plot_area()
    cx, cy = px + pw / 2.0, py + ph / 2.0
    r_outer = min(pw, ph) / 2.0 - 4.0
    r_inner = r_outer * 0.55 if spec.kind is ChartKind.DONUT else 0.0
    parts = []
    for row in spec.geometry:
        sweep = row["sweep"]
        if sweep <= 0:
            continue
        color = spec.style[row["label"]]
        if sweep >= 359.999:
            parts.append(
                f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r_outer)}" fill="{color}"/>'
            )
            if r_inner > 0:
                parts.append(
                    f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r_inner)}" fill="#ffffff"/>'
                )
            continue
        parts.append(
            f'<path d="{_wedge_path(cx, cy, r_outer, r_inner, row["start_angle"], sweep)}" '
            f'fill="{color}" stroke="#ffffff"/>'
        )
    counts = dict(zip(spec.categories_or_years, spec.series[0][1]))
    parts += _legend(
        spec,
        [(f"{label} ({counts[label]})", spec.style[label]) for label in spec.categories_or_years],
    )
    return parts


def _render_treemap(spec: ChartSpec) -> list[str]:
    px, py, pw, ph = _plot_area()
    parts = []
    for row in spec.geometry:
        w, h = row["w"] * pw, row["h"] * ph
        if w <= 0 or h <= 0:
            continue
        x, y = px + row["x"] * pw, py + row["y"] * ph
        parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{spec.style[row["label"]]}" stroke="#ffffff"/>'
        )
        if w > 70 and h > 18:
            parts.append(_text(x + 4.0, y + 14.0, row["label"], size=10.0))
    parts += _legend(
        spec, [(label, spec.style[label]) for label in spec.categories_or_years]
    )
    return parts


def _render_bubble(spec: ChartSpec) -> list[str]:
    px, py, pw, ph = _plot_area()
    side = min(pw, ph)
    parts = []
    for row in spec.geometry:
        if row["r"] <= 0:
            continue
        cx = px + row["cx"] * side
        cy = py + row["cy"] * side
        r = row["r"] * side
        parts.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" '
            f'fill="{spec.style[row["label"]]}" fill-opacity="0.85"/>'
        )
        if r > 22:
            parts.append(_text(cx, cy + 4.0, row["label"], size=10.0, anchor="middle"))
    parts += _legend(
        spec, [(label, spec.style[label]) for label in spec.categories_or_years]
    )
    return parts


def _render_tagcloud(spec: ChartSpec) -> list[str]:
    px, py, pw, _ = _plot_area()
    pw = pw + MARGIN_RIGHT - 20.0  # the cloud has no legend; use the full width
    parts = []
    x = px
    y = py + 40.0
    line_height = 54.0
    for row in spec.geometry:
        size = row["size"]
        width = 0.62 * size * len(row["label"]) + 14.0
        if x + width > px + pw and x > px:
            x = px
            y += line_height
        parts.append(
            _text(x, y, row["label"], size=size, color=spec.style[row["label"]])
        )
        x += width
    return parts


_RENDERERS = {
    ChartKind.BAR: _render_bar,
    ChartKind.LINE_SERIES: _render_line_series,
    ChartKind.PIE: _render_pie,
    ChartKind.DONUT: _render_pie,
    ChartKind.TREEMAP: _render_treemap,
    ChartKind.BUBBLE: _render_bubble,
    ChartKind.TAGCLOUD: _render_tagcloud,
}


def render_svg(spec: ChartSpec) -> str:
    """Well-formed standalone SVG; byte-identical for equal specs."""
    body: list[str]
    if spec.empty or not spec.series:
        body = [
            _text(WIDTH / 2.0, HEIGHT / 2.0, "no data", size=18.0, anchor="middle",
                  color="#888888")
        ]
    else:
        body = _RENDERERS[spec.kind](spec)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width={quoteattr(_f(WIDTH))} height={quoteattr(_f(HEIGHT))} '
        f'viewBox="0 0 {_f(WIDTH)} {_f(HEIGHT)}">',
        f'<rect x="0" y="0" width="{_f(WIDTH)}" height="{_f(HEIGHT)}" fill="#ffffff"/>',
        _text(16.0, 24.0, spec.title or "", size=15.0, extra=' font-weight="bold"'),
    ]
    lines.extend(body)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
