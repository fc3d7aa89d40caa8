"""
Randomized visual styles for chartsem charts.
"""

import numpy as np

from ..core.ids import MASK64
from ..core.types import LINE_FAMILY, ChartType, LineStyle, Marker, PieVariant, StyleParams

PALETTES = [
    ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b', '#e377c2', '#7f7f7f'],
    ['#4e79a7', '#f28e2b', '#e15759', '#76b7b2', '#59a14f', '#edc948', '#b07aa1', '#ff9da7'],
    ['#003f5c', '#2f4b7c', '#665191', '#a05195', '#d45087', '#f95d6a', '#ff7c43', '#ffa600'],
    ['#1b9e77', '#d95f02', '#7570b3', '#e7298a', '#66a61e', '#e6ab02', '#a6761d', '#666666'],
    ['#66c2a5', '#fc8d62', '#8da0cb', '#e78ac3', '#a6d854', '#ffd92f', '#e5c494', '#b3b3b3'],
    ['#264653', '#2a9d8f', '#8ab17d', '#e9c46a', '#f4a261', '#e76f51', '#9c6644', '#6d597a'],
    ['#0b84a5', '#f6c85f', '#6f4e7c', '#9dd866', '#ca472f', '#ffa056', '#8dddd0', '#5a5a5a'],
    ['#332288', '#117733', '#44aa99', '#88ccee', '#ddcc77', '#cc6677', '#aa4499', '#882255'],
]

LINE_STYLES = (LineStyle.SOLID, LineStyle.DASHED, LineStyle.DOTTED)
LINE_MARKERS = (Marker.CIRCLE, Marker.SQUARE, Marker.TRIANGLE, Marker.NONE)
SCATTER_MARKERS = (Marker.CIRCLE, Marker.SQUARE, Marker.TRIANGLE)


def palette_colors(palette_id: int):
    return PALETTES[palette_id % len(PALETTES)]


def randomize_style(seed: int, chart_type: ChartType, canvas_w: int = 800,
                    canvas_h: int = 500) -> StyleParams:
    """
    Draw a style for a chart.

    Line style and marker only vary for the line family (scatter always
    keeps a visible marker); the pie variant only varies for pie charts.
    """
    rng = np.random.default_rng(seed & MASK64)
    palette_id = int(rng.integers(len(PALETTES)))
    line_style = LineStyle.SOLID
    marker = Marker.NONE
    pie_variant = PieVariant.PIE

    if chart_type in LINE_FAMILY:
        line_style = LINE_STYLES[int(rng.integers(len(LINE_STYLES)))]
        markers = SCATTER_MARKERS if chart_type == ChartType.SCATTER else LINE_MARKERS
        marker = markers[int(rng.integers(len(markers)))]
    elif chart_type == ChartType.PIE:
        pie_variant = PieVariant.DONUT if rng.random() < 0.5 else PieVariant.PIE

    return StyleParams(
        palette_id=palette_id,
        line_style=line_style,
        marker=marker,
        pie_variant=pie_variant,
        canvas_w=canvas_w,
        canvas_h=canvas_h,
        seed=seed & MASK64,
    )
