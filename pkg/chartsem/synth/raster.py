"""
Analytic rasterization of chart primitives into occupancy grids.

Each cell of the h x w grid (one cell per canvas pixel) holds the covered
fraction of that cell. Rects and text boxes use exact area overlap; strokes,
discs, wedges and polygons use a one-pixel linear ramp at their boundary.
Coverage from several primitives combines by max; the donut hole erases.
"""

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..core.types import ChartSpec
from .layout import (
    CirclePrim,
    HolePrim,
    LinePrim,
    PolygonPrim,
    PolylinePrim,
    Primitive,
    RectPrim,
    TextPrim,
    WedgePrim,
    layout_chart,
)

TEXT_ROLES = ('title', 'subtitle', 'x_label', 'y_label', 'tick', 'legend')


class TextAnchor(NamedTuple):
    text: str
    x: float
    y: float
    role: str


@dataclass(frozen=True, eq=False)
class PixelGrid:
    w: int
    h: int
    occupancy: np.ndarray
    text_anchors: Tuple[TextAnchor, ...]

    @property
    def text(self) -> str:
        """All anchor strings joined in paint order (the simulated OCR output)."""
        return ' '.join(a.text for a in self.text_anchors)


def _overlap(lo: float, hi: float, start: int, stop: int) -> np.ndarray:
    """Length of [lo, hi] inside each unit cell [i, i+1] for i in [start, stop)."""
    cells = np.arange(start, stop, dtype=np.float64)
    return np.clip(np.minimum(hi, cells + 1.0) - np.maximum(lo, cells), 0.0, 1.0)


def _window(x0: float, y0: float, x1: float, y1: float, w: int, h: int) -> Optional[Tuple[int, int, int, int]]:
    c0, c1 = max(0, int(math.floor(x0))), min(w, int(math.ceil(x1)))
    r0, r1 = max(0, int(math.floor(y0))), min(h, int(math.ceil(y1)))
    if c0 >= c1 or r0 >= r1:
        return None
    return c0, r0, c1, r1


def _centers(win: Tuple[int, int, int, int]) -> Tuple[np.ndarray, np.ndarray]:
    c0, r0, c1, r1 = win
    xs = np.arange(c0, c1, dtype=np.float64) + 0.5
    ys = np.arange(r0, r1, dtype=np.float64) + 0.5
    return np.meshgrid(xs, ys)


def _paint(occ: np.ndarray, win, coverage: np.ndarray):
    c0, r0, c1, r1 = win
    np.maximum(occ[r0:r1, c0:c1], coverage, out=occ[r0:r1, c0:c1])


def _box(occ: np.ndarray, x0: float, y0: float, x1: float, y1: float):
    h, w = occ.shape
    win = _window(x0, y0, x1, y1, w, h)
    if win is None:
        return
    c0, r0, c1, r1 = win
    _paint(occ, win, np.outer(_overlap(y0, y1, r0, r1), _overlap(x0, x1, c0, c1)))


def _segment(occ: np.ndarray, a, b, width: float, dash: Tuple[float, ...] = (), offset: float = 0.0):
    h, w = occ.shape
    half = width / 2
    win = _window(min(a[0], b[0]) - half - 1, min(a[1], b[1]) - half - 1,
                  max(a[0], b[0]) + half + 1, max(a[1], b[1]) + half + 1, w, h)
    if win is None:
        return
    px, py = _centers(win)
    dx, dy = b[0] - a[0], b[1] - a[1]
    length2 = dx * dx + dy * dy
    if length2 == 0.0:
        t = np.zeros_like(px)
    else:
        t = np.clip(((px - a[0]) * dx + (py - a[1]) * dy) / length2, 0.0, 1.0)
    dist = np.hypot(px - (a[0] + t * dx), py - (a[1] + t * dy))
    coverage = np.clip(half + 0.5 - dist, 0.0, 1.0)
    if dash:
        period = sum(dash)
        along = offset + t * math.sqrt(length2)
        coverage = np.where(np.mod(along, period) < dash[0], coverage, 0.0)
    _paint(occ, win, coverage)


def _disc_coverage(occ_shape, cx: float, cy: float, r: float):
    h, w = occ_shape
    win = _window(cx - r - 1, cy - r - 1, cx + r + 1, cy + r + 1, w, h)
    if win is None:
        return None, None, None, None
    px, py = _centers(win)
    return win, px, py, np.clip(r + 0.5 - np.hypot(px - cx, py - cy), 0.0, 1.0)


def _wedge(occ: np.ndarray, p: WedgePrim):
    win, px, py, coverage = _disc_coverage(occ.shape, p.cx, p.cy, p.r)
    if win is None:
        return
    span = p.a1 - p.a0
    if span < 2 * math.pi - 1e-9:
        theta = np.arctan2(py - p.cy, px - p.cx)
        inside = np.mod(theta - p.a0, 2 * math.pi) <= span
        coverage = np.where(inside, coverage, 0.0)
    _paint(occ, win, coverage)


def _polygon(occ: np.ndarray, points):
    h, w = occ.shape
    xs = [q[0] for q in points]
    ys = [q[1] for q in points]
    win = _window(min(xs) - 1, min(ys) - 1, max(xs) + 1, max(ys) + 1, w, h)
    if win is None:
        return
    px, py = _centers(win)
    area2 = sum(points[i][0] * points[(i + 1) % len(points)][1] - points[(i + 1) % len(points)][0] * points[i][1]
                for i in range(len(points)))
    sign = 1.0 if area2 > 0 else -1.0
    inner = np.full(px.shape, np.inf)
    for i in range(len(points)):
        (x0, y0), (x1, y1) = points[i], points[(i + 1) % len(points)]
        edge = math.hypot(x1 - x0, y1 - y0)
        if edge == 0.0:
            continue
        signed = sign * ((x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)) / edge
        inner = np.minimum(inner, signed)
    _paint(occ, win, np.clip(inner + 0.5, 0.0, 1.0))


def paint_primitives(prims: List[Primitive], w: int, h: int) -> np.ndarray:
    """Occupancy grid of a primitive list on a w x h canvas."""
    occ = np.zeros((h, w), dtype=np.float64)
    for p in prims:
        if isinstance(p, RectPrim):
            _box(occ, p.x, p.y, p.x + p.w, p.y + p.h)
        elif isinstance(p, TextPrim):
            if p.text:
                _box(occ, *p.bbox())
        elif isinstance(p, LinePrim):
            _segment(occ, (p.x1, p.y1), (p.x2, p.y2), p.width)
        elif isinstance(p, PolylinePrim):
            travelled = 0.0
            for a, b in zip(p.points, p.points[1:]):
                _segment(occ, a, b, p.width, p.dash, travelled)
                travelled += math.hypot(b[0] - a[0], b[1] - a[1])
        elif isinstance(p, CirclePrim):
            win, _, _, coverage = _disc_coverage(occ.shape, p.cx, p.cy, p.r)
            if win is not None:
                _paint(occ, win, coverage)
        elif isinstance(p, PolygonPrim):
            _polygon(occ, p.points)
        elif isinstance(p, WedgePrim):
            _wedge(occ, p)
        elif isinstance(p, HolePrim):
            win, _, _, coverage = _disc_coverage(occ.shape, p.cx, p.cy, p.r)
            if win is not None:
                c0, r0, c1, r1 = win
                occ[r0:r1, c0:c1] *= 1.0 - coverage
    return occ


def rasterize(spec: ChartSpec) -> PixelGrid:
    """
    Rasterize a chart into an occupancy grid plus its text anchors.

    Args:
        spec: A valid chart spec.

    Returns:
        PixelGrid at canvas resolution.
    """
    w, h = spec.style.canvas_w, spec.style.canvas_h
    prims = layout_chart(spec)
    anchors = tuple(
        TextAnchor(p.text, min(max(p.x, 0.0), float(w)), min(max(p.y, 0.0), float(h)), p.role)
        for p in prims
        if isinstance(p, TextPrim) and p.text
    )
    return PixelGrid(w=w, h=h, occupancy=paint_primitives(prims, w, h), text_anchors=anchors)
