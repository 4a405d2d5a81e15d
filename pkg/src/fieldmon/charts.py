"""Renderer-agnostic chart specifications.

A ChartSpec is plain data: ordered labels, series values, a fixed color
assignment and precomputed geometry for the proportional kinds (pie and
donut angles, treemap rectangles, bubble circles, tag-cloud font sizes).
Identical input yields a byte-identical serialized spec, which is what
the UI consumes and the SVG renderer draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .indicators import DistributionResult, MultiSeries, YearSeries
from .jsonutil import canonical_json


class ChartKind(Enum):
    BAR = "bar"
    LINE_SERIES = "line_series"
    PIE = "pie"
    DONUT = "donut"
    TREEMAP = "treemap"
    BUBBLE = "bubble"
    TAGCLOUD = "tagcloud"


TIMESERIES_KINDS = (ChartKind.BAR, ChartKind.LINE_SERIES)
DISTRIBUTION_KINDS = (ChartKind.PIE, ChartKind.DONUT, ChartKind.TREEMAP, ChartKind.BUBBLE)

# Fixed 12-color palette, assigned in deterministic category order.
PALETTE = (
    "#a6cee3",
    "#1f78b4",
    "#b2df8a",
    "#33a02c",
    "#fb9a99",
    "#e31a1c",
    "#fdbf6f",
    "#ff7f00",
    "#cab2d6",
    "#6a3d9a",
    "#ffff99",
    "#b15928",
)

TAGCLOUD_MIN_SIZE = 12.0
TAGCLOUD_MAX_SIZE = 48.0
TAGCLOUD_FLAT_SIZE = 30.0


@dataclass(frozen=True)
class ChartSpec:
    kind: ChartKind
    title: str
    categories_or_years: tuple
    series: tuple[tuple[str, tuple], ...]
    style: dict[str, str]
    geometry: tuple[dict, ...] = ()
    meta: dict = field(default_factory=dict)
    empty: bool = False

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "title": self.title,
            "categories_or_years": list(self.categories_or_years),
            "series": [
                {"label": label, "values": list(values)} for label, values in self.series
            ],
            "style": {"colors": dict(self.style)},
            "geometry": [dict(row) for row in self.geometry],
            "meta": dict(self.meta),
            "empty": self.empty,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def empty_chart(kind: ChartKind, title: str = "", meta: dict | None = None) -> ChartSpec:
    return ChartSpec(
        kind=kind,
        title=title,
        categories_or_years=(),
        series=(),
        style={},
        geometry=(),
        meta=dict(meta or {}),
        empty=True,
    )


def _colors_for(labels: Iterable[str]) -> dict[str, str]:
    return {label: PALETTE[i % len(PALETTE)] for i, label in enumerate(labels)}


def _ordered_categories(counts: dict[str, int]) -> list[str]:
    """Count descending, ties by label ascending."""
    return sorted(counts, key=lambda label: (-counts[label], label))


def emit_timeseries(
    result: YearSeries | MultiSeries | None,
    kind: ChartKind,
    title: str = "",
    meta: dict | None = None,
) -> ChartSpec:
    """Years ascending on the x-axis; one series per label.

    A bar chart of a MultiSeries means grouped bars. ``None`` (the
    empty-range marker) produces the empty-chart spec.
    """
    if kind not in TIMESERIES_KINDS:
        raise ValueError(f"{kind.value} is not a time-series chart kind")
    if result is None:
        return empty_chart(kind, title, meta)
    if isinstance(result, YearSeries):
        labeled = [("projects", result)]
    else:
        labeled = list(result.series.items())
    years = tuple(labeled[0][1].years)
    series = tuple((label, tuple(s.values)) for label, s in labeled)
    return ChartSpec(
        kind=kind,
        title=title,
        categories_or_years=years,
        series=series,
        style=_colors_for(label for label, _ in series),
        geometry=(),
        meta=dict(meta or {}),
    )


def _pie_geometry(labels: list[str], counts: dict[str, int]) -> tuple[dict, ...]:
    total = sum(counts[label] for label in labels)
    geometry = []
    angle = 0.0
    for label in labels:
        sweep = 360.0 * counts[label] / total
        geometry.append({"label": label, "start_angle": angle, "sweep": sweep})
        angle += sweep
    return tuple(geometry)


def _treemap_geometry(labels: list[str], counts: dict[str, int]) -> tuple[dict, ...]:
    """Slice-and-dice in the unit square: each step slices the remaining
    rectangle along alternating axes, so every area equals its share."""
    total = sum(counts[label] for label in labels)
    geometry = []
    x, y, w, h = 0.0, 0.0, 1.0, 1.0
    remaining = float(total)
    horizontal = True
    for label in labels:
        count = counts[label]
        share = count / remaining if remaining else 0.0
        if horizontal:
            rect = {"label": label, "x": x, "y": y, "w": w * share, "h": h}
            x += w * share
            w -= w * share
        else:
            rect = {"label": label, "x": x, "y": y, "w": w, "h": h * share}
            y += h * share
            h -= h * share
        geometry.append(rect)
        remaining -= count
        horizontal = not horizontal
    return tuple(geometry)


def _bubble_geometry(labels: list[str], counts: dict[str, int]) -> tuple[dict, ...]:
    """Row-major grid of circles with area proportional to count."""
    columns = math.ceil(math.sqrt(len(labels))) if labels else 1
    cell = 1.0 / columns
    max_count = max((counts[label] for label in labels), default=0)
    geometry = []
    for index, label in enumerate(labels):
        row, column = divmod(index, columns)
        radius = (cell / 2.0) * math.sqrt(counts[label] / max_count) if max_count else 0.0
        geometry.append(
            {
                "label": label,
                "cx": (column + 0.5) * cell,
                "cy": (row + 0.5) * cell,
                "r": radius,
            }
        )
    return tuple(geometry)


def emit_distribution(
    result: DistributionResult,
    kind: ChartKind,
    title: str = "",
    meta: dict | None = None,
) -> ChartSpec:
    """Proportional rendering of a category distribution.

    Pie and donut slices get angular extent, treemap rectangles area and
    bubbles circle area proportional to count. An all-zero distribution
    becomes the empty-chart spec.
    """
    if kind not in DISTRIBUTION_KINDS:
        raise ValueError(f"{kind.value} is not a distribution chart kind")
    labels = _ordered_categories(result.counts)
    if sum(result.counts.values()) == 0:
        return empty_chart(kind, title, meta)
    if kind in (ChartKind.PIE, ChartKind.DONUT):
        geometry = _pie_geometry(labels, result.counts)
    elif kind is ChartKind.TREEMAP:
        geometry = _treemap_geometry(labels, result.counts)
    else:
        geometry = _bubble_geometry(labels, result.counts)
    return ChartSpec(
        kind=kind,
        title=title,
        categories_or_years=tuple(labels),
        series=(("count", tuple(result.counts[label] for label in labels)),),
        style=_colors_for(labels),
        geometry=geometry,
        meta=dict(meta or {}),
    )


def tagcloud_weight(count: int, min_count: int, max_count: int) -> float:
    """Linear map from the count range onto [12, 48]; flat inputs sit at 30."""
    if max_count == min_count:
        return TAGCLOUD_FLAT_SIZE
    span = TAGCLOUD_MAX_SIZE - TAGCLOUD_MIN_SIZE
    return TAGCLOUD_MIN_SIZE + (count - min_count) * span / (max_count - min_count)


def emit_tagcloud(
    result: DistributionResult, title: str = "", meta: dict | None = None
) -> ChartSpec:
    """Weighted labels; font size encodes how strongly a category is represented."""
    visible = {label: count for label, count in result.counts.items() if count > 0}
    labels = _ordered_categories(visible)
    if not labels:
        return empty_chart(ChartKind.TAGCLOUD, title, meta)
    min_count = min(visible.values())
    max_count = max(visible.values())
    geometry = tuple(
        {"label": label, "size": tagcloud_weight(visible[label], min_count, max_count)}
        for label in labels
    )
    return ChartSpec(
        kind=ChartKind.TAGCLOUD,
        title=title,
        categories_or_years=tuple(labels),
        series=(("count", tuple(visible[label] for label in labels)),),
        style=_colors_for(labels),
        geometry=geometry,
        meta=dict(meta or {}),
    )
