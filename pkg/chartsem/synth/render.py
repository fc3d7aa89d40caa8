"""
SVG renderer for chartsem.

Emits SVG 1.1 using only rect, line, circle, path and text elements. Each
element carries a class naming its role (title, subtitle, x_label, y_label,
tick, legend, axis, mark, marker, hole).
"""

import math
from typing import List
from xml.sax.saxutils import escape

from ..core.types import ChartSpec
from .layout import (
    HOLE_COLOR,
    TEXT_COLOR,
    CirclePrim,
    HolePrim,
    LinePrim,
    PolygonPrim,
    PolylinePrim,
    RectPrim,
    TextPrim,
    WedgePrim,
    layout_chart,
)


def _f(v: float) -> str:
    return f"{v:.2f}"


def _wedge_path(p: WedgePrim) -> str:
    span = p.a1 - p.a0
    if span >= 2 * math.pi - 1e-9:
        return _circle_path(p.cx, p.cy, p.r)
    x0, y0 = p.cx + p.r * math.cos(p.a0), p.cy + p.r * math.sin(p.a0)
    x1, y1 = p.cx + p.r * math.cos(p.a1), p.cy + p.r * math.sin(p.a1)
    large = 1 if span > math.pi else 0
    return (f"M {_f(p.cx)} {_f(p.cy)} L {_f(x0)} {_f(y0)} "
            f"A {_f(p.r)} {_f(p.r)} 0 {large} 1 {_f(x1)} {_f(y1)} Z")


def _circle_path(cx: float, cy: float, r: float) -> str:
    return (f"M {_f(cx - r)} {_f(cy)} A {_f(r)} {_f(r)} 0 1 1 {_f(cx + r)} {_f(cy)} "
            f"A {_f(r)} {_f(r)} 0 1 1 {_f(cx - r)} {_f(cy)} Z")


def _element(p) -> str:
    if isinstance(p, TextPrim):
        transform = f' transform="rotate({p.rotate:g} {_f(p.x)} {_f(p.y)})"' if p.rotate else ''
        return (f'<text class="{p.role}" x="{_f(p.x)}" y="{_f(p.y)}" font-size="{_f(p.size)}" '
                f'text-anchor="{p.anchor}" fill="{TEXT_COLOR}"{transform}>{escape(p.text)}</text>')
    if isinstance(p, RectPrim):
        return (f'<rect class="{p.role}" x="{_f(p.x)}" y="{_f(p.y)}" width="{_f(p.w)}" '
                f'height="{_f(p.h)}" fill="{p.fill}"/>')
    if isinstance(p, LinePrim):
        return (f'<line class="{p.role}" x1="{_f(p.x1)}" y1="{_f(p.y1)}" x2="{_f(p.x2)}" '
                f'y2="{_f(p.y2)}" stroke="{p.stroke}" stroke-width="{_f(p.width)}"/>')
    if isinstance(p, PolylinePrim):
        d = 'M ' + ' L '.join(f"{_f(x)} {_f(y)}" for x, y in p.points)
        dash = f' stroke-dasharray="{" ".join(f"{v:g}" for v in p.dash)}"' if p.dash else ''
        return (f'<path class="{p.role}" d="{d}" fill="none" stroke="{p.stroke}" '
                f'stroke-width="{_f(p.width)}"{dash}/>')
    if isinstance(p, CirclePrim):
        return f'<circle class="{p.role}" cx="{_f(p.cx)}" cy="{_f(p.cy)}" r="{_f(p.r)}" fill="{p.fill}"/>'
    if isinstance(p, PolygonPrim):
        d = 'M ' + ' L '.join(f"{_f(x)} {_f(y)}" for x, y in p.points) + ' Z'
        return f'<path class="{p.role}" d="{d}" fill="{p.fill}"/>'
    if isinstance(p, WedgePrim):
        return f'<path class="{p.role}" d="{_wedge_path(p)}" fill="{p.fill}"/>'
    if isinstance(p, HolePrim):
        return f'<path class="{p.role}" d="{_circle_path(p.cx, p.cy, p.r)}" fill="{HOLE_COLOR}"/>'
    raise TypeError(f"unknown primitive {type(p).__name__}")


def render_svg(spec: ChartSpec) -> str:
    """
    Render a chart spec to an SVG document.

    Pie wedges and the donut hole are emitted as two separate groups.
    """
    w, h = spec.style.canvas_w, spec.style.canvas_h
    lines: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    prims = layout_chart(spec)
    wedges = [p for p in prims if isinstance(p, WedgePrim)]
    holes = [p for p in prims if isinstance(p, HolePrim)]
    for p in prims:
        if isinstance(p, (WedgePrim, HolePrim)):
            continue
        lines.append(_element(p))
    if wedges:
        lines.append('<g class="wedges">')
        lines.extend(_element(p) for p in wedges)
        lines.append('</g>')
    if holes:
        lines.append('<g class="hole">')
        lines.extend(_element(p) for p in holes)
        lines.append('</g>')
    lines.append('</svg>')
    return '\n'.join(lines) + '\n'
