"""
Image preprocessing modes for chartsem.

direct_resize scales the whole canvas (anisotropically) to S x S.
center_crop keeps the largest centered square and scales it to S x S;
text anchors outside that square are dropped.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.types import PreprocessKind
from ..synth.raster import PixelGrid, TextAnchor

MIN_SIDE = 32


@dataclass(frozen=True)
class PreprocessMode:
    kind: PreprocessKind = PreprocessKind.DIRECT_RESIZE
    side: int = 512

    def __post_init__(self):
        if self.side < MIN_SIDE:
            raise ValueError(f"preprocess side must be >= {MIN_SIDE}, got {self.side}")

    @property
    def tag(self) -> str:
        return self.kind.value


DIRECT_RESIZE = PreprocessMode(PreprocessKind.DIRECT_RESIZE)
CENTER_CROP = PreprocessMode(PreprocessKind.CENTER_CROP)


def viewport(w: int, h: int, kind: PreprocessKind) -> Tuple[float, float, float, float]:
    """Source window (x0, y0, x1, y1) a mode keeps from a w x h canvas."""
    if kind == PreprocessKind.CENTER_CROP:
        side = min(w, h)
        x0 = (w - side) / 2.0
        y0 = (h - side) / 2.0
        return x0, y0, x0 + side, y0 + side
    return 0.0, 0.0, float(w), float(h)


def area_matrix(lo: float, hi: float, n_src: int, n_dst: int) -> np.ndarray:
    """
    Area-averaging resample matrix.

    Row i averages source cells over [lo + i*step, lo + (i+1)*step] with
    step = (hi - lo) / n_dst, weighting each cell by its overlap.
    """
    step = (hi - lo) / n_dst
    starts = lo + step * np.arange(n_dst, dtype=np.float64)
    cells = np.arange(n_src, dtype=np.float64)
    overlap = np.clip(
        np.minimum(starts[:, None] + step, cells[None, :] + 1.0) - np.maximum(starts[:, None], cells[None, :]),
        0.0,
        None,
    )
    return overlap / step


def pool_window(occupancy: np.ndarray, window: Tuple[float, float, float, float],
                out_h: int, out_w: int) -> np.ndarray:
    """Area-resample a window of an occupancy grid to out_h x out_w."""
    h, w = occupancy.shape
    x0, y0, x1, y1 = window
    rows = area_matrix(y0, y1, h, out_h)
    cols = area_matrix(x0, x1, w, out_w)
    return np.clip(rows @ occupancy @ cols.T, 0.0, 1.0)


def keep_anchor(anchor: TextAnchor, window: Tuple[float, float, float, float]) -> bool:
    x0, y0, x1, y1 = window
    return x0 <= anchor.x <= x1 and y0 <= anchor.y <= y1


def preprocess(grid: PixelGrid, mode: PreprocessMode) -> PixelGrid:
    """
    Apply a preprocessing mode to a rasterized chart.

    Args:
        grid: Canvas-resolution occupancy grid with text anchors.
        mode: Resize or crop, and the target side S.

    Returns:
        An S x S PixelGrid whose anchors are mapped into the new frame.
    """
    window = viewport(grid.w, grid.h, mode.kind)
    x0, y0, x1, y1 = window
    sx = mode.side / (x1 - x0)
    sy = mode.side / (y1 - y0)
    anchors = tuple(
        TextAnchor(a.text, (a.x - x0) * sx, (a.y - y0) * sy, a.role)
        for a in grid.text_anchors
        if keep_anchor(a, window)
    )
    return PixelGrid(
        w=mode.side,
        h=mode.side,
        occupancy=pool_window(grid.occupancy, window, mode.side, mode.side),
        text_anchors=anchors,
    )
