"""
Statistical task battery for chartsem.

Ten low-level tasks run on a chart's data: trend, extremum, range, center,
correlation, anomaly, distribution, order, derived value and cluster
dominance. Most tasks look at the primary (first) series only.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy import stats

from ..core.types import ChartSpec, ChartType, Series, XValue
from ..errors import InsufficientDataError
from ..utils.formatting import format_sig

logger = logging.getLogger(__name__)

ANOMALY_Z = 2.5
FLAT_TOLERANCE = 1e-9
DOMINANT_SHARE = 0.5


class Trend(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    FLAT = "flat"


@dataclass(frozen=True)
class StatReport:
    trend: Trend
    slope: float
    argmax: XValue
    max_value: float
    argmin: XValue
    min_value: float
    range_lo: float
    range_hi: float
    mean: float
    median: float
    correlation: Optional[float]
    anomalies: Tuple[Tuple[int, float], ...]
    stddev: float
    skew_sign: int
    top_categories: Tuple[XValue, ...]
    total: float
    share_of_top: float
    dominant: bool
    n_points: int
    anomaly_labels: Tuple[XValue, ...] = field(default=())

    def summary_lines(self) -> List[str]:
        """Key statistics as short lines, the input of the statistics prompt."""
        lines = [
            f"Trend: {self.trend.value} (slope {format_sig(self.slope)})",
            f"Maximum: {label(self.argmax)} = {format_sig(self.max_value)}",
            f"Minimum: {label(self.argmin)} = {format_sig(self.min_value)}",
            f"Range: {format_sig(self.range_lo)} to {format_sig(self.range_hi)}",
            f"Mean: {format_sig(self.mean)}; median: {format_sig(self.median)}",
            f"Standard deviation: {format_sig(self.stddev)}; skewness sign: {self.skew_sign:+d}",
            f"Top categories: {', '.join(label(x) for x in self.top_categories)}",
            f"Sum: {format_sig(self.total)}; share of top value: {format_sig(self.share_of_top)}",
        ]
        if self.correlation is not None:
            lines.append(f"Pearson correlation: {format_sig(self.correlation)}")
        if self.anomalies:
            lines.append(f"Anomalies (|z| >= {ANOMALY_Z}): {len(self.anomalies)}")
        return lines


def label(x: XValue) -> str:
    return format_sig(x) if isinstance(x, float) else str(x)


def _x_positions(series: Series) -> np.ndarray:
    xs = series.x_values
    if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in xs):
        return np.asarray(xs, dtype=np.float64)
    return np.arange(len(xs), dtype=np.float64)


def _correlation(spec: ChartSpec) -> Optional[float]:
    if spec.chart_type == ChartType.SCATTER:
        x = _x_positions(spec.primary)
        y = np.asarray(spec.primary.y_values, dtype=np.float64)
    elif len(spec.series) == 2:
        first, second = spec.series
        other = dict(second.points)
        common = [(v, other[x]) for x, v in first.points if x in other]
        if len(common) < 2:
            return None
        x = np.array([a for a, _ in common], dtype=np.float64)
        y = np.array([b for _, b in common], dtype=np.float64)
    else:
        return None
    if len(x) < 2 or np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return None
    r = float(stats.pearsonr(x, y)[0])
    if not math.isfinite(r):
        return None
    return max(-1.0, min(1.0, r))


def run_stat_tasks(spec: ChartSpec) -> StatReport:
    """
    Run the ten statistical tasks on a chart.

    Args:
        spec: Chart whose primary series has at least two points.

    Returns:
        The populated StatReport.

    Raises:
        InsufficientDataError: If the primary series has fewer than two points.
    """
    if not spec.series or len(spec.primary.points) < 2:
        raise InsufficientDataError(f"insufficient data: chart {spec.id} needs at least 2 points")

    series = spec.primary
    xs = series.x_values
    y = np.asarray(series.y_values, dtype=np.float64)
    n = y.size

    fit = stats.linregress(_x_positions(series), y)
    slope = float(fit.slope)
    scale = float(np.max(np.abs(y))) or 1.0
    if abs(slope) < FLAT_TOLERANCE * scale:
        trend = Trend.FLAT
    else:
        trend = Trend.INCREASING if slope > 0 else Trend.DECREASING

    i_max, i_min = int(np.argmax(y)), int(np.argmin(y))
    std = float(np.std(y))
    anomalies: List[Tuple[int, float]] = []
    if std > 0.0:
        z = (y - y.mean()) / std
        anomalies = [(int(i), float(z[i])) for i in np.flatnonzero(np.abs(z) >= ANOMALY_Z)]

    skew_sign = 0
    if std > 0.0:
        skewness = float(stats.skew(y))
        if math.isfinite(skewness) and abs(skewness) > 1e-12:
            skew_sign = 1 if skewness > 0 else -1

    order = np.argsort(-y, kind='stable')[:3]
    magnitudes = np.abs(y)
    abs_total = float(magnitudes.sum())
    share = float(magnitudes.max() / abs_total) if abs_total > 0 else 0.0

    return StatReport(
        trend=trend,
        slope=slope,
        argmax=xs[i_max],
        max_value=float(y[i_max]),
        argmin=xs[i_min],
        min_value=float(y[i_min]),
        range_lo=float(y.min()),
        range_hi=float(y.max()),
        mean=float(y.mean()),
        median=float(np.median(y)),
        correlation=_correlation(spec),
        anomalies=tuple(anomalies),
        stddev=std,
        skew_sign=skew_sign,
        top_categories=tuple(xs[int(i)] for i in order),
        total=float(y.sum()),
        share_of_top=share,
        dominant=share >= DOMINANT_SHARE,
        n_points=n,
        anomaly_labels=tuple(xs[i] for i, _ in anomalies),
    )
