"""
Query generation for chartsem benchmark groups.

Each group gets a precise query (content that separates the target from its
distractors) and a fuzzy query (what the chart is for). The template backend
is deterministic; the generative backend sends the query prompt with the five
charts' metadata and falls back to templates per query.
"""

import calendar
import json
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..core.ids import query_id
from ..core.types import BenchmarkGroup, ChartSpec, ChartType, QueryKind, TextQuery
from ..core.validation import TEMPORAL_RE
from ..data import prompts
from ..data.themes import QUERY_PURPOSES, THEMES
from ..errors import ServiceError
from ..insights.generative import EndpointConfig, generative_complete
from ..insights.stats import label

logger = logging.getLogger(__name__)

MIN_WORDS = 10
MAX_WORDS = 15
MAX_CHARS = 120

PAD_WORDS = "for quick reference in dashboards and reports".split()
GENERIC_EXTRAS = ("with detailed values", "for the selected period", "in one view")

_TITLE_SCOPE = re.compile(r" in (?P<place>[^()]+) \((?P<span>[^()]+)\)$")


def _clean(text: str) -> str:
    return ' '.join(text.replace(',', ' ').split())


def _compose(core: str, extras: Sequence[str]) -> str:
    """Grow a phrase to 10-15 words, comma-free and at most 120 characters."""
    words = _clean(core).split()
    for extra in extras:
        if len(words) >= MIN_WORDS:
            break
        more = _clean(extra).split()
        if more and len(words) + len(more) <= MAX_WORDS:
            words += more
    for word in PAD_WORDS:
        if len(words) >= MIN_WORDS:
            break
        words.append(word)
    words = words[:MAX_WORDS]
    while len(' '.join(words)) > MAX_CHARS and len(words) > MIN_WORDS:
        words.pop()
    return ' '.join(words)


def query_problems(text: str) -> List[str]:
    """Contract violations of a query text (empty when it is usable)."""
    problems = []
    n_words = len(text.split())
    if not MIN_WORDS <= n_words <= MAX_WORDS:
        problems.append(f"{n_words} words, expected {MIN_WORDS}-{MAX_WORDS}")
    if ',' in text:
        problems.append("contains a comma")
    if len(text) > MAX_CHARS:
        problems.append(f"{len(text)} characters, expected at most {MAX_CHARS}")
    return problems


def _place(spec: ChartSpec) -> str:
    match = _TITLE_SCOPE.search(spec.title)
    return match.group('place') if match else ''


def _type_words(spec: ChartSpec) -> str:
    return spec.chart_type.value.replace('_', ' ')


def _temporal_xs(spec: ChartSpec) -> List[str]:
    xs = {x for s in spec.series for x in s.x_values}
    if xs and all(isinstance(x, str) and TEMPORAL_RE.match(x) for x in xs):
        return sorted(xs)
    return []


def _period_words(value: str) -> str:
    if len(value) == 7:
        year, month = value.split('-')
        return f"{calendar.month_name[int(month)].lower()} {year}"
    return value


def _window(xs: List[str]) -> Optional[Tuple[str, str]]:
    """
    A time sub-range that is shorter than the chart's full span.

    Four or more points drop one point at each end. Three points give the
    first two, so the window starts on the span's first point.
    """
    if len(xs) >= 4:
        return xs[1], xs[-2]
    if len(xs) == 3:
        return xs[0], xs[1]
    return None


def _category_labels(spec: ChartSpec) -> List[str]:
    labels: List[str] = list(spec.categories)
    if spec.chart_type in (ChartType.BAR, ChartType.PIE, ChartType.GROUPED_BAR, ChartType.STACKED_BAR):
        for x in spec.primary.x_values:
            if isinstance(x, str) and x not in labels:
                labels.append(x)
    return labels


def _window_excludes(distractor: ChartSpec, target: ChartSpec, window: Tuple[str, str], place: str) -> bool:
    if distractor.y_name != target.y_name:
        return True
    if place and _place(distractor) != place:
        return True
    xs = _temporal_xs(distractor)
    return not xs or xs[0] > window[0] or xs[-1] < window[1]


def _precise_template(target: ChartSpec, distractors: Sequence[ChartSpec]) -> Tuple[str, bool]:
    place = _place(target)
    where = f" in {place}" if place else ''
    extras = [f"shown as a {_type_words(target)} chart", *GENERIC_EXTRAS]

    window = _window(_temporal_xs(target))
    if window and all(_window_excludes(d, target, window, place) for d in distractors):
        core = f"{target.y_name}{where} from {_period_words(window[0])} to {_period_words(window[1])}"
        return _compose(core, extras), True

    others: Set[str] = {c for d in distractors for c in _category_labels(d)}
    unique = [c for c in _category_labels(target) if c not in others][:2]
    if unique:
        core = f"{target.y_name} for {' and '.join(unique)}{where}"
        return _compose(core, [f"by {target.x_name}", *extras]), True

    pair = (target.x_name, target.y_name)
    if all((d.x_name, d.y_name) != pair for d in distractors):
        core = f"{target.y_name} by {target.x_name}{where}"
        return _compose(core, extras), True

    core = f"{_type_words(target)} chart of {target.y_name} by {target.x_name}{where}"
    match = _TITLE_SCOPE.search(target.title)
    span = [f"for {match.group('span')}"] if match else []
    return _compose(core, [*span, *GENERIC_EXTRAS]), False


def _fuzzy_template(target: ChartSpec) -> str:
    purpose = QUERY_PURPOSES[target.chart_type.value]
    if target.chart_type == ChartType.SCATTER:
        core = f"{purpose} between {target.y_name} and {target.x_name}"
    else:
        core = f"{purpose} of {target.y_name} by {target.x_name}"
    place = _place(target)
    theme = THEMES.get(target.theme)
    extras = [f"in {place}" if place else '', f"for {theme['context']}" if theme else '', *GENERIC_EXTRAS]
    return _compose(core, extras)


def _x_span(spec: ChartSpec) -> str:
    xs = spec.primary.x_values
    return f"{label(xs[0])} to {label(xs[-1])}" if xs else ''


def build_query_prompt(target: ChartSpec, distractors: Sequence[ChartSpec]) -> Tuple[str, str]:
    """
    Fill the query prompt; the target is always the first visualization.

    Returns:
        Tuple of (system_prompt, user_prompt).
    """
    blocks = []
    for position, spec in enumerate([target, *distractors], start=1):
        blocks.append(prompts.QUERY_CHART_BLOCK.format(
            position=position,
            marker=' (FIRST, the target)' if position == 1 else '',
            title=spec.title,
            subtitle=spec.subtitle,
            chart=spec.chart_type.value,
            x_name=spec.x_name,
            x_span=_x_span(spec),
            y_name=spec.y_name,
            categories_or_single=', '.join(spec.categories) or 'Single category',
        ))
    return prompts.QUERY_PROMPT.format(), '\n'.join(blocks)


def parse_query_response(text: str) -> Tuple[str, str]:
    """
    Read the precise and fuzzy queries from a service response.

    Raises:
        ServiceError: If no JSON object with both queries is found.
    """
    start, end = text.find('{'), text.rfind('}')
    if start < 0 or end <= start:
        raise ServiceError("query response carries no JSON object")
    try:
        data = json.loads(text[start:end + 1])
        precise, fuzzy = data['Precise query'], data['Fuzzy query']
    except (ValueError, KeyError, TypeError) as e:
        raise ServiceError(f"unparseable query response: {e}") from e
    if not isinstance(precise, str) or not isinstance(fuzzy, str):
        raise ServiceError("query response fields must be strings")
    return precise.strip(), fuzzy.strip()


def gen_queries(group: BenchmarkGroup, target_spec: ChartSpec, distractor_specs: Sequence[ChartSpec],
                backend: Optional[EndpointConfig] = None) -> Tuple[TextQuery, TextQuery]:
    """
    Generate the precise and fuzzy query of a group.

    Args:
        group: The group; supplies ids.
        target_spec: The group's target chart.
        distractor_specs: The group's distractor charts.
        backend: Generative endpoint, or None for templates.

    Returns:
        Tuple of (precise query, fuzzy query).
    """
    precise_text, discriminative = _precise_template(target_spec, distractor_specs)
    fuzzy_text = _fuzzy_template(target_spec)

    if backend is not None:
        try:
            system_prompt, user_prompt = build_query_prompt(target_spec, distractor_specs)
            generated_precise, generated_fuzzy = parse_query_response(
                generative_complete(system_prompt, user_prompt, backend))
            if not query_problems(generated_precise):
                precise_text, discriminative = generated_precise, True
            else:
                logger.warning(f"Template precise query for {group.group_id}: "
                               f"{query_problems(generated_precise)[0]}")
            if not query_problems(generated_fuzzy):
                fuzzy_text = generated_fuzzy
            else:
                logger.warning(f"Template fuzzy query for {group.group_id}: {query_problems(generated_fuzzy)[0]}")
        except ServiceError as e:
            logger.warning(f"Falling back to template queries for {group.group_id}: {e}")

    precise = TextQuery(query_id(group.group_id, QueryKind.PRECISE.value), precise_text, QueryKind.PRECISE,
                        target_spec.id, group.group_id, discriminative)
    fuzzy = TextQuery(query_id(group.group_id, QueryKind.FUZZY.value), fuzzy_text, QueryKind.FUZZY,
                      target_spec.id, group.group_id)
    return precise, fuzzy


def attach_queries(groups: Sequence[BenchmarkGroup], charts: Dict[str, ChartSpec],
                   backend: Optional[EndpointConfig] = None) -> List[BenchmarkGroup]:
    """Generate queries for every group and return the groups with queries set."""

    def one(group: BenchmarkGroup) -> BenchmarkGroup:
        precise, fuzzy = gen_queries(group, charts[group.target_id],
                                     [charts[cid] for cid in group.distractor_ids], backend)
        return replace(group, precise_query=precise, fuzzy_query=fuzzy)

    if backend is not None and backend.concurrency > 1:
        with ThreadPoolExecutor(max_workers=backend.concurrency) as pool:
            result = list(pool.map(one, groups))
    else:
        result = [one(group) for group in groups]
    fallback = sum(1 for g in result if not g.precise_query.discriminative)
    logger.info(f"Generated queries for {len(result)} groups ({fallback} non-discriminative precise queries)")
    return result
