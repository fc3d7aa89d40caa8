"""
Benchmark overview statistics for chartsem.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import pandas as pd

from ..core.types import ChartSpec, QueryKind, TextQuery

logger = logging.getLogger(__name__)

LENGTH_BIN = 25
LENGTH_CAP = 150


@dataclass
class BenchmarkStats:
    n_charts: int = 0
    n_queries: int = 0
    n_precise: int = 0
    n_fuzzy: int = 0
    charts_per_query: float = 0.0
    n_chart_types: int = 0
    length_histogram: Dict[str, int] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            ('charts', self.n_charts),
            ('queries', self.n_queries),
            ('precise queries', self.n_precise),
            ('fuzzy queries', self.n_fuzzy),
            ('charts per query', round(self.charts_per_query, 2)),
            ('chart types', self.n_chart_types),
        ]
        rows += [(f"query length {bin_label}", count) for bin_label, count in self.length_histogram.items()]
        return pd.DataFrame(rows, columns=['statistic', 'value'])


def _bin_labels() -> List[str]:
    labels = [f"{lo}-{lo + LENGTH_BIN - 1}" for lo in range(0, LENGTH_CAP, LENGTH_BIN)]
    return labels + [f"{LENGTH_CAP}+"]


def benchmark_statistics(charts: Sequence[ChartSpec], queries: Sequence[TextQuery]) -> BenchmarkStats:
    """
    Summarize a benchmark: sizes, chart type count and query lengths in characters.
    """
    lengths = pd.Series([len(q.text) for q in queries], dtype='int64')
    edges = list(range(0, LENGTH_CAP + 1, LENGTH_BIN)) + [float('inf')]
    binned = pd.cut(lengths, bins=edges, right=False, labels=_bin_labels())
    counts = binned.value_counts(sort=False)

    n_precise = sum(1 for q in queries if q.kind == QueryKind.PRECISE)
    result = BenchmarkStats(
        n_charts=len(charts),
        n_queries=len(queries),
        n_precise=n_precise,
        n_fuzzy=len(queries) - n_precise,
        charts_per_query=len(charts) / len(queries) if queries else 0.0,
        n_chart_types=len({c.chart_type for c in charts}),
        length_histogram={str(label): int(counts.get(label, 0)) for label in _bin_labels()},
    )
    logger.debug(f"Benchmark statistics: {result}")
    return result
