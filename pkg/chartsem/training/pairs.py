"""
Training pairs for chartsem.
"""

import logging
from dataclasses import dataclass
from typing import Collection, Dict, List, Sequence, Tuple

from ..core.types import ALL_LEVELS, ChartSpec, Insight, InsightLevel
from ..errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainPair:
    chart_id: str
    text: str
    level: InsightLevel


def build_pairs(charts: Sequence[ChartSpec], insights: Sequence[Insight],
                levels: Collection[InsightLevel]) -> Tuple[List[TrainPair], int]:
    """
    One positive pair per (chart, insight) of a requested level.

    Args:
        charts: Corpus charts.
        insights: Corpus insights.
        levels: Non-empty subset of insight levels.

    Returns:
        Tuple of (pairs ordered by chart id then level, number of charts
        skipped because a requested level was missing).
    """
    if not levels:
        raise ConfigError("at least one insight level is required to build training pairs")
    by_chart: Dict[str, Dict[InsightLevel, Insight]] = {}
    for insight in insights:
        by_chart.setdefault(insight.chart_id, {})[insight.level] = insight

    ordered_levels = [level for level in ALL_LEVELS if level in levels]
    pairs: List[TrainPair] = []
    skipped = 0
    for spec in sorted(charts, key=lambda c: c.id):
        available = by_chart.get(spec.id, {})
        if any(level not in available for level in ordered_levels):
            skipped += 1
            continue
        for level in ordered_levels:
            text = available[level].text
            if text.strip():
                pairs.append(TrainPair(spec.id, text, level))
    if skipped:
        logger.warning(f"Skipped {skipped} charts missing a requested insight level")
    return pairs, skipped
