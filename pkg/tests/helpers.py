"""
Record builders for tests.
"""

from chartsem.core.types import (
    ChartSpec,
    ChartType,
    Insight,
    InsightLevel,
    Provenance,
    Series,
    StyleParams,
    TextQuery,
    QueryKind,
)


def make_chart(chart_id, chart_type=ChartType.BAR, points=(("a", 1.0), ("b", 2.0), ("c", 3.0)),
               series=None, title="Sales by region in Lisbon (2012)", x_name="region", y_name="sales",
               categories=(), table_id="tbl-00000-000000", canvas=(800, 500)):
    if series is None:
        series = (Series("", tuple(points)),)
    return ChartSpec(
        id=chart_id,
        chart_type=chart_type,
        title=title,
        subtitle="",
        x_name=x_name,
        y_name=y_name,
        categories=tuple(categories),
        series=tuple(series),
        style=StyleParams(canvas_w=canvas[0], canvas_h=canvas[1]),
        source_table_id=table_id,
        svg_path=f"svg/{chart_id}.svg",
    )


def make_insight(chart_id, level=InsightLevel.VISUAL, words=40):
    text = ' '.join(f"{level.value}{i}" for i in range(words))
    return Insight(chart_id, level, text, Provenance.TEMPLATE)


def make_insights(chart_id, words=40):
    return [make_insight(chart_id, level, words) for level in InsightLevel]


def make_query(query_id, target, kind=QueryKind.PRECISE, group="grp-x", text="sales by region in lisbon"):
    return TextQuery(query_id, text, kind, target, group)
