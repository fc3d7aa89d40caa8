"""
Invariant checks for corpus records.

Violations are returned as data; callers decide whether to raise.
"""

import math
import re
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence

from .types import (
    BenchmarkGroup,
    ChartSpec,
    ChartType,
    ColumnKind,
    Insight,
    Provenance,
    Table,
    TextQuery,
    Violation,
)

TEMPORAL_RE = re.compile(r"^\d{4}(-(0[1-9]|1[0-2]))?$")

MIN_INSIGHT_WORDS = 30
MAX_INSIGHT_WORDS = 160


def cell_matches(kind: ColumnKind, value) -> bool:
    """Check that a cell parses as its column kind."""
    if kind == ColumnKind.NUMERIC:
        return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    if kind == ColumnKind.TEMPORAL:
        return isinstance(value, str) and bool(TEMPORAL_RE.match(value))
    return isinstance(value, str) and value != ""


def validate_table(table: Table) -> List[str]:
    """Return human-readable problems with a table (empty when valid)."""
    problems = []
    names = [c.name for c in table.columns]
    if any(not name for name in names):
        problems.append("empty column name")
    if len(set(names)) != len(names):
        problems.append("duplicate column names")
    width = len(table.columns)
    for r, row in enumerate(table.rows):
        if len(row) != width:
            problems.append(f"row {r} has {len(row)} cells, expected {width}")
            continue
        for column, value in zip(table.columns, row):
            if value is None:
                problems.append(f"row {r} has a missing value in '{column.name}'")
            elif not cell_matches(column.kind, value):
                problems.append(f"row {r} cell '{column.name}'={value!r} is not {column.kind.value}")
    return problems


def validate_chart(spec: ChartSpec) -> List[str]:
    problems = []
    if not isinstance(spec.chart_type, ChartType):
        problems.append(f"unknown chart type {spec.chart_type!r}")
    if not spec.series:
        problems.append("chart has no series")
    if not spec.categories and len(spec.series) > 1:
        problems.append("single-series chart (no categories) has several series")
    for series in spec.series:
        label = series.category or "<primary>"
        if not series.points:
            problems.append(f"series {label} is empty")
            continue
        xs = series.x_values
        if len(set(xs)) != len(xs):
            problems.append(f"series {label} has duplicate x values")
        if any(not math.isfinite(y) for y in series.y_values):
            problems.append(f"series {label} has non-finite values")
    if spec.chart_type == ChartType.PIE:
        if len(spec.series) != 1:
            problems.append("pie chart must have exactly one series")
        elif any(y < 0 for y in spec.series[0].y_values):
            problems.append("pie chart has a negative slice")
    style = spec.style
    if not 0 < style.title_band_frac < 0.25:
        problems.append(f"title_band_frac {style.title_band_frac} outside (0, 0.25)")
    if not 0 < style.margin_frac < 0.25:
        problems.append(f"margin_frac {style.margin_frac} outside (0, 0.25)")
    if style.canvas_w < 64 or style.canvas_h < 64:
        problems.append(f"canvas {style.canvas_w}x{style.canvas_h} smaller than 64 px")
    return problems


def validate_insight(insight: Insight) -> List[str]:
    problems = []
    if not insight.text.strip():
        problems.append("empty insight text")
    elif insight.provenance == Provenance.TEMPLATE:
        words = insight.word_count
        if not MIN_INSIGHT_WORDS <= words <= MAX_INSIGHT_WORDS:
            problems.append(
                f"{insight.level.value} insight has {words} words, "
                f"expected {MIN_INSIGHT_WORDS}-{MAX_INSIGHT_WORDS}"
            )
    return problems


def validate_query(query: TextQuery, group: Optional[BenchmarkGroup] = None) -> List[str]:
    """Problems of one query; with a group, its references must point back to it."""
    problems = []
    if not query.text.strip():
        problems.append("empty query text")
    if group is not None:
        if query.group_id != group.group_id:
            problems.append(f"query belongs to {query.group_id}, attached to {group.group_id}")
        if query.target_chart_id != group.target_id:
            problems.append(f"query targets {query.target_chart_id}, group target is {group.target_id}")
    return problems


def validate_corpus(charts: Sequence[ChartSpec], insights: Sequence[Insight],
                    tables: Optional[Iterable[Table]] = None) -> List[Violation]:
    """
    Check every type invariant of a corpus.

    Args:
        charts: Chart specs.
        insights: Insights; each must reference a known chart.
        tables: Optional source tables. A table problem is reported against
            every chart that references the table.

    Returns:
        List of violations, empty iff the corpus is valid.
    """
    violations: List[Violation] = []
    chart_ids = set()
    charts_by_table: Dict[str, List[str]] = defaultdict(list)

    for spec in charts:
        if spec.id in chart_ids:
            violations.append(Violation(spec.id, "duplicate chart id"))
        chart_ids.add(spec.id)
        charts_by_table[spec.source_table_id].append(spec.id)
        for problem in validate_chart(spec):
            violations.append(Violation(spec.id, problem))

    for table in tables or []:
        problems = validate_table(table)
        if not problems:
            continue
        owners = charts_by_table.get(table.id) or [table.id]
        for owner in owners:
            for problem in problems:
                violations.append(Violation(owner, f"table {table.id}: {problem}"))

    for insight in insights:
        record = f"{insight.chart_id}/{insight.level.value}"
        if insight.chart_id not in chart_ids:
            violations.append(Violation(record, f"insight references unknown chart {insight.chart_id}"))
        for problem in validate_insight(insight):
            violations.append(Violation(record, problem))

    return violations
