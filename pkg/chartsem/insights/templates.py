"""
Template insight generation for chartsem.

Deterministic narratives at three levels: visual (what the chart looks
like), statistics (what the numbers say) and task (what the chart is for).
"""

import logging
import re
from typing import List, Optional, Sequence

from ..core.types import (
    LINE_FAMILY,
    ChartSpec,
    ChartType,
    Insight,
    InsightLevel,
    LineStyle,
    Marker,
    PieVariant,
    Provenance,
)
from ..data.themes import CHART_PURPOSES, THEMES
from ..errors import DependencyError
from .stats import StatReport, Trend, label

logger = logging.getLogger(__name__)

MAX_LISTED = 8
MAX_LEAD_WORDS = 40

_SENTENCE_END = re.compile(r"[.!?](?=\s|$)")


def join_words(items: Sequence[str]) -> str:
    items = [str(i) for i in items]
    if not items:
        return ''
    if len(items) == 1:
        return items[0]
    return ', '.join(items[:-1]) + ' and ' + items[-1]


def _x_extent(spec: ChartSpec) -> str:
    xs: List = []
    for series in spec.series:
        for x in series.x_values:
            if x not in xs:
                xs.append(x)
    if spec.chart_type in LINE_FAMILY:
        try:
            xs = sorted(xs)
        except TypeError:
            pass
    return f"from {label(xs[0])} to {label(xs[-1])}" if len(xs) > 1 else f"at {label(xs[0])}"


_VISUAL_ENCODING = {
    ChartType.BAR: ("Each bar stands for one {x} value and its height encodes the {y}, so the "
                    "{n} bars can be ranked at a glance."),
    ChartType.PIE: ("Each slice stands for one {x} value and its angle is proportional to that "
                    "value's share of the total {y}, so the {n} slices together form the whole."),
    ChartType.LINE: ("A continuous line connects the {n} points in order of {x}, so the reader can "
                     "follow how the {y} rises or falls from one period to the next."),
    ChartType.SCATTER: ("Each of the {n} points places one observation by its {x} and its {y}, so "
                        "the shape of the cloud shows whether the two measures move together."),
    ChartType.GROUPED_LINE: ("One line is drawn per series on shared axes, so the paths of the {y} "
                             "can be compared over {x}."),
    ChartType.GROUPED_BAR: ("Bars are grouped by {x} with one bar per series placed side by side, "
                            "which supports comparison within and across groups."),
    ChartType.STACKED_BAR: ("Bars for each {x} value are stacked by series, so the full height shows "
                            "the total {y} while each segment shows one part of it."),
}


def _style_sentence(spec: ChartSpec) -> str:
    style = spec.style
    if spec.chart_type == ChartType.PIE:
        if style.pie_variant == PieVariant.DONUT:
            return " The slices are drawn as a donut with an empty center."
        return " The slices are drawn as a full pie."
    if spec.chart_type == ChartType.SCATTER:
        return f" Points are drawn as {style.marker.value} markers."
    if spec.chart_type in LINE_FAMILY:
        line = "solid" if style.line_style == LineStyle.SOLID else style.line_style.value
        if style.marker == Marker.NONE:
            return f" Lines are {line} without point markers."
        return f" Lines are {line} with {style.marker.value} markers at each data point."
    return ""


def gen_visual_insight(spec: ChartSpec) -> Insight:
    """
    Describe the visual structure of a chart.

    The text always begins with "This <chart_type> chart" and mentions the
    axis names and every category.
    """
    x, y = spec.x_name, spec.y_name
    parts = [f'This {spec.chart_type.value} chart titled "{spec.title}" shows how {y} varies with {x}.']
    if spec.subtitle:
        parts.append(f' Its subtitle reads "{spec.subtitle}".')
    n = len(spec.primary.points)
    parts.append(' ' + _VISUAL_ENCODING[spec.chart_type].format(x=x, y=y, n=n))
    parts.append(_style_sentence(spec))
    if spec.categories:
        parts.append(f" The series shown are {join_words(spec.categories)}, each drawn in its own "
                     f"color and named in the legend.")
    else:
        parts.append(" A single series of values is shown.")
    if spec.chart_type != ChartType.PIE:
        parts.append(f" The horizontal axis runs {_x_extent(spec)} and the vertical axis measures {y}.")
    parts.append(f" Together these elements give a clear visual summary of {y} across {x}.")
    return Insight(spec.id, InsightLevel.VISUAL, ''.join(parts), Provenance.TEMPLATE)


def _strength(r: float) -> str:
    magnitude = abs(r)
    if magnitude >= 0.7:
        return "strong"
    if magnitude >= 0.3:
        return "moderate"
    return "weak"


def gen_stats_insight(spec: ChartSpec, report: StatReport) -> Insight:
    """
    Summarize a StatReport in prose; numbers use 4 significant digits.
    """
    x, y = spec.x_name, spec.y_name
    fmt = label
    if report.trend == Trend.FLAT:
        trend = f"The {y} stays flat across {x} with a least-squares slope of {fmt(report.slope)}."
    else:
        trend = (f"The {y} shows an overall {report.trend.value} trend across {x} with a "
                 f"least-squares slope of {fmt(report.slope)}.")
    parts = [
        "Statistical Analysis: ",
        trend,
        f" The highest value is {fmt(report.max_value)} at {label(report.argmax)} and the lowest is "
        f"{fmt(report.min_value)} at {label(report.argmin)}, so values range from "
        f"{fmt(report.range_lo)} to {fmt(report.range_hi)}.",
        f" The mean is {fmt(report.mean)} and the median is {fmt(report.median)} with a standard "
        f"deviation of {fmt(report.stddev)}",
    ]
    if report.skew_sign > 0:
        parts.append(" and a right-skewed distribution.")
    elif report.skew_sign < 0:
        parts.append(" and a left-skewed distribution.")
    else:
        parts.append(" and a symmetric distribution.")
    parts.append(f" Ranked by value the leading entries are {join_words([label(c) for c in report.top_categories])}"
                 f" and all values sum to {fmt(report.total)}.")
    share_pct = fmt(100.0 * report.share_of_top)
    if report.dominant:
        parts.append(f" The top entry alone accounts for {share_pct} percent of the total, which makes it dominant.")
    else:
        parts.append(f" The top entry accounts for {share_pct} percent of the total, so no single entry dominates.")
    if report.correlation is not None:
        r = report.correlation
        if r > 0:
            parts.append(f" The data show a {_strength(r)} positive correlation with r = {fmt(r)}.")
        elif r < 0:
            parts.append(f" The data show a {_strength(r)} negative correlation with r = {fmt(r)}.")
        else:
            parts.append(f" The data show no linear correlation with r = {fmt(r)}.")
    if report.anomalies:
        worst = max(range(len(report.anomalies)), key=lambda i: abs(report.anomalies[i][1]))
        count = len(report.anomalies)
        noun = "anomaly stands" if count == 1 else "anomalies stand"
        parts.append(f" {count} {noun} out, the largest at {label(report.anomaly_labels[worst])} "
                     f"with a z-score of {fmt(report.anomalies[worst][1])}.")
    return Insight(spec.id, InsightLevel.STATISTICS, ''.join(parts), Provenance.TEMPLATE)


_TASK_DECISIONS = {
    ChartType.LINE: "It is suited to monitoring trends over time and deciding when a change in direction calls for action.",
    ChartType.GROUPED_LINE: "It is suited to monitoring trends over time and deciding which series needs attention first.",
    ChartType.BAR: "It is suited to ranking and comparing entries and deciding where to focus effort or resources.",
    ChartType.GROUPED_BAR: "It is suited to ranking and comparing subgroups and deciding where differences are large enough to act on.",
    ChartType.STACKED_BAR: "It is suited to proportion decisions where both totals and the mix of parts matter.",
    ChartType.PIE: "It is suited to allocation and proportion decision-making where the share of each part matters most.",
    ChartType.SCATTER: "It is suited to relationship screening and deciding whether one measure can guide expectations about the other.",
}


def _lead_sentence(text: str) -> Optional[str]:
    match = _SENTENCE_END.search(text)
    lead = text[:match.end()].strip() if match else text.strip()
    if not lead or len(lead.split()) > MAX_LEAD_WORDS:
        return None
    return lead


def gen_task_insight(spec: ChartSpec, visual: Optional[Insight]) -> Insight:
    """
    Describe the purpose and practical applications of a chart.

    The opening sentence of the visual insight states what the chart shows;
    the task text repeats it before naming the audience and decisions.

    Args:
        spec: The chart.
        visual: The visual insight of the same chart.

    Raises:
        DependencyError: If the visual insight is missing or belongs to another chart.
    """
    if visual is None or visual.chart_id != spec.id or visual.level != InsightLevel.VISUAL:
        raise DependencyError(f"task insight for {spec.id} needs its visual insight")
    theme = THEMES.get(spec.theme)
    context = theme['context'] if theme else 'general data analysis'
    audience = theme['audience'] if theme else 'analysts'
    x, y = spec.x_name, spec.y_name
    purpose = CHART_PURPOSES[spec.chart_type.value]
    shown = _lead_sentence(visual.text) or f"It presents {y} against {x} in \"{spec.title}\"."
    parts = [
        f"Main Purpose: The chart supports {purpose} in {context}.",
        f" {shown}",
    ]
    if spec.categories:
        listed = list(spec.categories[:MAX_LISTED])
        parts.append(f" It covers {join_words(listed)}.")
    parts.append(f" This lets {audience} read the situation without consulting the raw table.")
    parts.append(' ' + _TASK_DECISIONS[spec.chart_type])
    parts.append(f" The {spec.chart_type.value.replace('_', ' ')} layout keeps the comparison simple, and the chart "
                 f"can be used in reports and briefings on {spec.theme or 'the topic'} to justify planning choices.")
    return Insight(spec.id, InsightLevel.TASK, ''.join(parts), Provenance.TEMPLATE)
