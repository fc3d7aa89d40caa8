"""
Chart geometry for chartsem.

layout_chart() turns a ChartSpec into a flat list of drawing primitives in
canvas pixel coordinates (origin top-left, y down). The SVG renderer and the
rasterizer both consume this list, so the picture and the occupancy grid can
never disagree.

Layout bands:
    title band   y in [0, title_band_frac * H]       title centered
    left margin  x in [0, margin_frac * W]           y-axis name, y ticks
    bottom band  y in [H - margin_frac * H, H]       x ticks, x-axis name
    right margin x in [W - margin_frac * W, W]       legend
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from ..core.types import BAR_FAMILY, ChartSpec, ChartType, LineStyle, Marker, PieVariant
from ..utils.formatting import format_tick
from .style import palette_colors

TITLE_FONT_MAX = 20.0
TITLE_FONT_MIN = 6.0
AXIS_NAME_FONT = 13.0
TICK_FONT = 11.0
LEGEND_FONT = 11.0
SUBTITLE_FONT = 11.0

# Text boxes are approximated as CHAR_WIDTH * size per character by 1.0 * size.
CHAR_WIDTH = 0.55
ASCENT = 0.8

AXIS_COLOR = '#333333'
TEXT_COLOR = '#222222'
HOLE_COLOR = '#ffffff'

DASHES = {
    LineStyle.SOLID: (),
    LineStyle.DASHED: (6.0, 4.0),
    LineStyle.DOTTED: (2.0, 3.0),
}

MAX_X_LABELS = 12
N_Y_TICKS = 5
MARKER_SIZE = 3.5


@dataclass(frozen=True)
class RectPrim:
    x: float
    y: float
    w: float
    h: float
    fill: str
    role: str


@dataclass(frozen=True)
class LinePrim:
    x1: float
    y1: float
    x2: float
    y2: float
    stroke: str
    width: float
    role: str


@dataclass(frozen=True)
class PolylinePrim:
    points: Tuple[Tuple[float, float], ...]
    stroke: str
    width: float
    dash: Tuple[float, ...]
    role: str


@dataclass(frozen=True)
class CirclePrim:
    cx: float
    cy: float
    r: float
    fill: str
    role: str


@dataclass(frozen=True)
class PolygonPrim:
    points: Tuple[Tuple[float, float], ...]
    fill: str
    role: str


@dataclass(frozen=True)
class WedgePrim:
    """Pie slice; angles in radians, clockwise on screen from the +x axis."""

    cx: float
    cy: float
    r: float
    a0: float
    a1: float
    fill: str
    role: str


@dataclass(frozen=True)
class HolePrim:
    """Disc painted in background color; erases what lies beneath it."""

    cx: float
    cy: float
    r: float
    role: str = 'hole'


@dataclass(frozen=True)
class TextPrim:
    text: str
    x: float
    y: float
    size: float
    anchor: str
    role: str
    rotate: float = 0.0

    def bbox(self) -> Tuple[float, float, float, float]:
        """(x0, y0, x1, y1) of the approximated glyph box."""
        length = CHAR_WIDTH * self.size * len(self.text)
        if self.anchor == 'middle':
            along0, along1 = -length / 2, length / 2
        elif self.anchor == 'end':
            along0, along1 = -length, 0.0
        else:
            along0, along1 = 0.0, length
        if self.rotate == -90.0:
            # Text runs bottom-to-top; glyph tops point to -x.
            return (self.x - ASCENT * self.size, self.y - along1,
                    self.x + (1 - ASCENT) * self.size, self.y - along0)
        return (self.x + along0, self.y - ASCENT * self.size,
                self.x + along1, self.y + (1 - ASCENT) * self.size)


Primitive = Union[RectPrim, LinePrim, PolylinePrim, CirclePrim, PolygonPrim, WedgePrim, HolePrim, TextPrim]


@dataclass(frozen=True)
class Frame:
    width: float
    height: float
    left: float
    right: float
    top: float
    bottom: float

    @property
    def plot_w(self) -> float:
        return self.right - self.left

    @property
    def plot_h(self) -> float:
        return self.bottom - self.top


def chart_frame(spec: ChartSpec) -> Frame:
    style = spec.style
    w, h = float(style.canvas_w), float(style.canvas_h)
    return Frame(
        width=w,
        height=h,
        left=style.margin_frac * w,
        right=w - style.margin_frac * w,
        top=style.title_band_frac * h + 0.06 * h,
        bottom=h - style.margin_frac * h,
    )


def title_font_size(title: str, width: float) -> float:
    if not title:
        return TITLE_FONT_MAX
    fitted = 0.9 * width / (CHAR_WIDTH * len(title))
    return max(TITLE_FONT_MIN, min(TITLE_FONT_MAX, fitted))


def _value_range(values: Sequence[float], include_zero: bool) -> Tuple[float, float]:
    lo, hi = min(values), max(values)
    if include_zero:
        lo, hi = min(lo, 0.0), max(hi, 0.0)
    else:
        pad = 0.05 * (hi - lo)
        lo, hi = lo - pad, hi + pad
    if hi - lo <= 0.0:
        spread = abs(hi) * 0.1 or 1.0
        lo, hi = lo - spread, hi + spread
    return lo, hi


class _Scale:
    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float):
        self.lo, self.hi = lo, hi
        self.out_lo, self.out_hi = out_lo, out_hi

    def __call__(self, v: float) -> float:
        return self.out_lo + (v - self.lo) * (self.out_hi - self.out_lo) / (self.hi - self.lo)


def _x_keys(spec: ChartSpec) -> List:
    """Union of x values over all series, first-appearance order."""
    seen = {}
    for series in spec.series:
        for x in series.x_values:
            seen.setdefault(x, None)
    return list(seen)


def _text_prims(spec: ChartSpec, frame: Frame) -> List[Primitive]:
    style = spec.style
    band = style.title_band_frac * frame.height
    margin_w = style.margin_frac * frame.width
    margin_h = style.margin_frac * frame.height
    prims: List[Primitive] = [
        TextPrim(spec.title, frame.width / 2, 0.7 * band, title_font_size(spec.title, frame.width),
                 'middle', 'title'),
    ]
    if spec.subtitle:
        prims.append(TextPrim(spec.subtitle, frame.width / 2, band + ASCENT * SUBTITLE_FONT + 2,
                              SUBTITLE_FONT, 'middle', 'subtitle'))
    prims.append(TextPrim(spec.x_name, (frame.left + frame.right) / 2, frame.height - 0.25 * margin_h,
                          AXIS_NAME_FONT, 'middle', 'x_label'))
    prims.append(TextPrim(spec.y_name, 0.25 * margin_w, (frame.top + frame.bottom) / 2,
                          AXIS_NAME_FONT, 'middle', 'y_label', rotate=-90.0))
    return prims


def _legend(labels: Sequence[str], colors: Sequence[str], frame: Frame) -> List[Primitive]:
    prims: List[Primitive] = []
    step = LEGEND_FONT + 5
    capacity = max(1, int(frame.plot_h // step))
    for i, label in enumerate(labels[:capacity]):
        y = frame.top + 12 + i * step
        prims.append(RectPrim(frame.right + 6, y - 8, 8, 8, colors[i % len(colors)], 'legend'))
        prims.append(TextPrim(label, frame.right + 18, y, LEGEND_FONT, 'start', 'legend'))
    return prims


def _axes(frame: Frame) -> List[Primitive]:
    return [
        LinePrim(frame.left, frame.bottom, frame.right, frame.bottom, AXIS_COLOR, 1.0, 'axis'),
        LinePrim(frame.left, frame.top, frame.left, frame.bottom, AXIS_COLOR, 1.0, 'axis'),
    ]


def _y_ticks(y_scale: _Scale, frame: Frame) -> List[Primitive]:
    prims: List[Primitive] = []
    for i in range(N_Y_TICKS):
        value = y_scale.lo + (y_scale.hi - y_scale.lo) * i / (N_Y_TICKS - 1)
        y = y_scale(value)
        prims.append(LinePrim(frame.left - 4, y, frame.left, y, AXIS_COLOR, 1.0, 'axis'))
        prims.append(TextPrim(format_tick(value), frame.left - 6, y + 4, TICK_FONT, 'end', 'tick'))
    return prims


def _x_tick_labels(keys: Sequence, positions: Sequence[float], frame: Frame) -> List[Primitive]:
    prims: List[Primitive] = []
    stride = max(1, math.ceil(len(keys) / MAX_X_LABELS))
    for i in range(0, len(keys), stride):
        label = format_tick(keys[i]) if isinstance(keys[i], float) else str(keys[i])
        prims.append(LinePrim(positions[i], frame.bottom, positions[i], frame.bottom + 4, AXIS_COLOR, 1.0, 'axis'))
        prims.append(TextPrim(label, positions[i], frame.bottom + 15, TICK_FONT, 'middle', 'tick'))
    return prims


def _marker(kind: Marker, x: float, y: float, color: str) -> Optional[Primitive]:
    s = MARKER_SIZE
    if kind == Marker.CIRCLE:
        return CirclePrim(x, y, s, color, 'marker')
    if kind == Marker.SQUARE:
        return RectPrim(x - s, y - s, 2 * s, 2 * s, color, 'marker')
    if kind == Marker.TRIANGLE:
        return PolygonPrim(((x, y - s * 1.2), (x + s * 1.1, y + s * 0.8), (x - s * 1.1, y + s * 0.8)),
                           color, 'marker')
    return None


def _bar_layout(spec: ChartSpec, frame: Frame, colors: Sequence[str]) -> List[Primitive]:
    keys = _x_keys(spec)
    band = frame.plot_w / len(keys)
    centers = [frame.left + band * (i + 0.5) for i in range(len(keys))]
    index = {k: i for i, k in enumerate(keys)}

    if spec.chart_type == ChartType.STACKED_BAR:
        pos = [0.0] * len(keys)
        neg = [0.0] * len(keys)
        for series in spec.series:
            for x, v in series.points:
                i = index[x]
                if v >= 0:
                    pos[i] += v
                else:
                    neg[i] += v
        lo, hi = _value_range(pos + neg, include_zero=True)
    else:
        lo, hi = _value_range([v for s in spec.series for v in s.y_values], include_zero=True)
    y_scale = _Scale(lo, hi, frame.bottom, frame.top)

    prims: List[Primitive] = _axes(frame) + _y_ticks(y_scale, frame)
    n_series = len(spec.series)
    pos = [0.0] * len(keys)
    neg = [0.0] * len(keys)
    for s_idx, series in enumerate(spec.series):
        color = colors[s_idx % len(colors)]
        for x, v in series.points:
            i = index[x]
            if spec.chart_type == ChartType.GROUPED_BAR:
                width = 0.8 * band / n_series
                x0 = centers[i] - 0.4 * band + s_idx * width
                base, top = 0.0, v
            elif spec.chart_type == ChartType.STACKED_BAR:
                width = 0.7 * band
                x0 = centers[i] - width / 2
                if v >= 0:
                    base, top = pos[i], pos[i] + v
                    pos[i] = top
                else:
                    base, top = neg[i], neg[i] + v
                    neg[i] = top
            else:
                width = 0.7 * band
                x0 = centers[i] - width / 2
                base, top = 0.0, v
            y_a, y_b = y_scale(base), y_scale(top)
            prims.append(RectPrim(x0, min(y_a, y_b), width, abs(y_a - y_b), color, 'mark'))
    prims += _x_tick_labels(keys, centers, frame)
    if spec.categories:
        prims += _legend(list(spec.categories), colors, frame)
    return prims


def _line_layout(spec: ChartSpec, frame: Frame, colors: Sequence[str]) -> List[Primitive]:
    keys = _x_keys(spec)
    numeric_x = all(isinstance(k, (int, float)) for k in keys)
    pad = 0.03 * frame.plot_w
    if numeric_x:
        x_lo, x_hi = _value_range([float(k) for k in keys], include_zero=False)
        x_scale = _Scale(x_lo, x_hi, frame.left, frame.right)
        x_pos = {k: x_scale(float(k)) for k in keys}
        tick_keys = [x_lo + (x_hi - x_lo) * (i + 0.5) / N_Y_TICKS for i in range(N_Y_TICKS)]
        tick_pos = [x_scale(v) for v in tick_keys]
    else:
        ordered = sorted(keys)
        n = len(ordered)
        if n == 1:
            x_pos = {ordered[0]: (frame.left + frame.right) / 2}
        else:
            x_pos = {k: frame.left + pad + (frame.plot_w - 2 * pad) * i / (n - 1) for i, k in enumerate(ordered)}
        tick_keys = ordered
        tick_pos = [x_pos[k] for k in ordered]

    lo, hi = _value_range([v for s in spec.series for v in s.y_values], include_zero=False)
    y_scale = _Scale(lo, hi, frame.bottom, frame.top)

    prims: List[Primitive] = _axes(frame) + _y_ticks(y_scale, frame)
    style = spec.style
    dash = DASHES[style.line_style]
    for s_idx, series in enumerate(spec.series):
        color = colors[s_idx % len(colors)]
        points = sorted(series.points, key=lambda p: p[0])
        coords = tuple((x_pos[x], y_scale(v)) for x, v in points)
        if spec.chart_type != ChartType.SCATTER and len(coords) >= 2:
            prims.append(PolylinePrim(coords, color, 2.0, dash, 'mark'))
        for px, py in coords:
            marker = _marker(style.marker, px, py, color)
            if marker is not None:
                prims.append(marker)
    prims += _x_tick_labels(tick_keys, tick_pos, frame)
    if spec.categories:
        prims += _legend(list(spec.categories), colors, frame)
    return prims


def _pie_layout(spec: ChartSpec, frame: Frame, colors: Sequence[str]) -> List[Primitive]:
    cx = (frame.left + frame.right) / 2
    cy = (frame.top + frame.bottom) / 2
    r = 0.45 * min(frame.plot_w, frame.plot_h)
    series = spec.primary
    total = sum(series.y_values)
    prims: List[Primitive] = []
    if total > 0:
        angle = -math.pi / 2
        for i, (_, v) in enumerate(series.points):
            if v <= 0:
                continue
            span = 2 * math.pi * v / total
            prims.append(WedgePrim(cx, cy, r, angle, angle + span, colors[i % len(colors)], 'mark'))
            angle += span
    if spec.style.pie_variant == PieVariant.DONUT:
        prims.append(HolePrim(cx, cy, 0.55 * r))
    prims += _legend([str(x) for x in series.x_values], colors, frame)
    return prims


def layout_chart(spec: ChartSpec) -> List[Primitive]:
    """
    Compute every primitive of a chart.

    Args:
        spec: A valid chart spec.

    Returns:
        Primitives in paint order: text, axes and ticks, data marks, legend.
    """
    frame = chart_frame(spec)
    colors = palette_colors(spec.style.palette_id)
    prims = _text_prims(spec, frame)
    if spec.chart_type == ChartType.PIE:
        prims += _pie_layout(spec, frame, colors)
    elif spec.chart_type in BAR_FAMILY:
        prims += _bar_layout(spec, frame, colors)
    else:
        prims += _line_layout(spec, frame, colors)
    return prims
