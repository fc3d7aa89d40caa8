"""
Rule-based chart recommendation for chartsem.

Maps column pairings of a table to chart specs:
    (categorical, numeric)              -> bar, pie (<= 10 slices, no negatives)
    (temporal, numeric)                 -> line
    (numeric, numeric)                  -> scatter
    (categorical, temporal, numeric)    -> grouped_line
    (categorical, categorical, numeric) -> grouped_bar, stacked_bar
Candidates from the rules are interleaved round-robin before truncation so a
small max_charts still mixes chart types.
"""

import logging
from itertools import combinations, zip_longest
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from ..core.ids import chart_id, derive_seed, stable_hash64
from ..core.types import ChartSpec, ChartType, Column, ColumnKind, Series, Table
from ..core.validation import validate_chart
from ..data.themes import ORGANISATIONS, PLACES
from .style import randomize_style

logger = logging.getLogger(__name__)

MAX_PIE_SLICES = 10
MAX_SERIES = 8

# Candidate = (chart_type, x column, y column, series column or None)
Candidate = Tuple[ChartType, Column, Column, Optional[Column]]


def _frame(table: Table) -> pd.DataFrame:
    return pd.DataFrame(list(table.rows), columns=[c.name for c in table.columns])


def _aggregate(df: pd.DataFrame, x: Column, y: Column) -> List[Tuple[object, float]]:
    # Temporal x is ordered by time; categorical x keeps first-appearance order.
    grouped = df.groupby(x.name, sort=x.kind == ColumnKind.TEMPORAL)[y.name].mean()
    return [(str(key), float(value)) for key, value in grouped.items()]


def _scatter_points(df: pd.DataFrame, x: Column, y: Column) -> List[Tuple[float, float]]:
    pairs = df[[x.name, y.name]].drop_duplicates(subset=x.name, keep='first')
    pairs = pairs.sort_values(x.name, kind='mergesort')
    return [(float(a), float(b)) for a, b in pairs.itertuples(index=False)]


def _series_by(df: pd.DataFrame, x: Column, y: Column, by: Column) -> List[Series]:
    series = []
    for value in pd.unique(df[by.name])[:MAX_SERIES]:
        subset = df[df[by.name] == value]
        series.append(Series(category=str(value), points=tuple(_aggregate(subset, x, y))))
    return series


def _candidates(table: Table) -> List[List[Candidate]]:
    cats = table.columns_of(ColumnKind.CATEGORICAL)
    nums = table.columns_of(ColumnKind.NUMERIC)
    temps = table.columns_of(ColumnKind.TEMPORAL)

    rules: List[List[Candidate]] = [[], [], [], [], []]
    for c in cats:
        for n in nums:
            rules[0].append((ChartType.BAR, c, n, None))
            rules[0].append((ChartType.PIE, c, n, None))
    for t in temps:
        for n in nums:
            rules[1].append((ChartType.LINE, t, n, None))
    for n1, n2 in combinations(nums, 2):
        rules[2].append((ChartType.SCATTER, n1, n2, None))
    for c in cats:
        for t in temps:
            for n in nums:
                rules[3].append((ChartType.GROUPED_LINE, t, n, c))
    for c1, c2 in combinations(cats, 2):
        for n in nums:
            rules[4].append((ChartType.GROUPED_BAR, c1, n, c2))
            rules[4].append((ChartType.STACKED_BAR, c1, n, c2))
    return rules


def _scope(table: Table) -> Tuple[str, str]:
    h = stable_hash64(table.id)
    place = PLACES[h % len(PLACES)]
    org = ORGANISATIONS[(h // len(PLACES)) % len(ORGANISATIONS)]
    return place, org


def _span_label(table: Table, series: Sequence[Series], x: Column) -> str:
    if x.kind == ColumnKind.TEMPORAL:
        xs = sorted({str(v) for s in series for v in s.x_values})
        return f"{xs[0]} to {xs[-1]}"
    return str(2000 + (stable_hash64(table.id + '/year') % 24))


def _title(chart_type: ChartType, x: Column, y: Column, by: Optional[Column], place: str, span: str) -> str:
    y_name = y.name[0].upper() + y.name[1:]
    if chart_type == ChartType.PIE:
        base = f"Share of {y.name} by {x.name}"
    elif chart_type == ChartType.LINE:
        base = f"{y_name} per {x.name}"
    elif chart_type == ChartType.GROUPED_LINE:
        base = f"{y_name} per {x.name} for each {by.name}"
    elif chart_type == ChartType.SCATTER:
        base = f"{y_name} versus {x.name}"
    elif chart_type == ChartType.GROUPED_BAR:
        base = f"{y_name} by {x.name} and {by.name}"
    elif chart_type == ChartType.STACKED_BAR:
        base = f"{y_name} by {x.name} stacked by {by.name}"
    else:
        base = f"{y_name} by {x.name}"
    return f"{base} in {place} ({span})"


def _build(table: Table, df: pd.DataFrame, candidate: Candidate, position: int,
           style_seed: int, canvas: Tuple[int, int]) -> Optional[ChartSpec]:
    chart_type, x, y, by = candidate
    if chart_type == ChartType.SCATTER:
        series = [Series("", tuple(_scatter_points(df, x, y)))]
    elif by is None:
        series = [Series("", tuple(_aggregate(df, x, y)))]
    else:
        series = _series_by(df, x, y, by)
        if len(series) < 2:
            return None

    if any(len(s.points) < 2 for s in series[:1]):
        return None
    if chart_type == ChartType.PIE:
        values = series[0].y_values
        if len(values) > MAX_PIE_SLICES or any(v < 0 for v in values):
            return None

    cid = chart_id(table.id, position)
    place, org = _scope(table)
    span = _span_label(table, series, x)
    subtitle = "" if stable_hash64(cid) % 4 == 0 else f"Source: {org}"
    spec = ChartSpec(
        id=cid,
        chart_type=chart_type,
        title=_title(chart_type, x, y, by, place, span),
        subtitle=subtitle,
        x_name=x.name,
        y_name=y.name,
        categories=tuple(s.category for s in series) if by is not None else (),
        series=tuple(series),
        style=randomize_style(derive_seed(style_seed, 'style', cid), chart_type, *canvas),
        source_table_id=table.id,
        svg_path=f"svg/{cid}.svg",
        theme=table.theme,
    )
    problems = validate_chart(spec)
    if problems:
        logger.debug(f"Dropping {chart_type.value} candidate for {table.id}: {problems[0]}")
        return None
    return spec


def recommend_charts(table: Table, max_charts: int, style_seed: int = 0,
                     canvas: Tuple[int, int] = (800, 500)) -> List[ChartSpec]:
    """
    Recommend charts for a table.

    Args:
        table: Source table (valid).
        max_charts: Upper bound on the number of specs.
        style_seed: Seed mixed into every chart's style draw.
        canvas: Canvas (width, height) in pixels.

    Returns:
        Between 0 and max_charts chart specs. A table with no usable column
        pairing yields an empty list.
    """
    df = _frame(table)
    ordered = [c for group in zip_longest(*_candidates(table)) for c in group if c is not None]

    charts: List[ChartSpec] = []
    for candidate in ordered:
        if len(charts) >= max_charts:
            break
        spec = _build(table, df, candidate, len(charts), style_seed, canvas)
        if spec is not None:
            charts.append(spec)
    return charts
