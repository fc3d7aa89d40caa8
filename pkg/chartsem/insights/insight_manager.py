"""
Insight Manager for chartsem.

Produces the three insights of every chart, optionally through a generative
endpoint with per-insight fallback to templates.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.types import ChartSpec, Insight, InsightLevel, Provenance
from ..errors import ChartsemError, ServiceError
from .generative import EndpointConfig, build_insight_prompt, generative_complete
from .stats import StatReport, run_stat_tasks
from .templates import gen_stats_insight, gen_task_insight, gen_visual_insight

logger = logging.getLogger(__name__)


@dataclass
class SynthesisReport:
    n_charts: int = 0
    n_insights: int = 0
    n_generated: int = 0
    n_fallbacks: int = 0
    skipped: List[Tuple[str, str]] = field(default_factory=list)


class InsightManager:
    """Synthesizes visual, statistics and task insights."""

    def __init__(self, endpoint: Optional[EndpointConfig] = None):
        """
        Initialize the insight manager.

        Args:
            endpoint: Generative endpoint. If None, templates only.
        """
        self.endpoint = endpoint

    def _complete(self, level: InsightLevel, spec: ChartSpec, report: StatReport,
                  fallback: Insight) -> Tuple[Insight, bool]:
        system_prompt, user_prompt = build_insight_prompt(level, spec, report)
        try:
            text = generative_complete(system_prompt, user_prompt, self.endpoint)
            return Insight(spec.id, level, text, Provenance.GENERATIVE_SERVICE), True
        except ServiceError as e:
            logger.warning(f"Falling back to template {level.value} insight for {spec.id}: {e}")
            return fallback, False

    def _generate_chart(self, spec: ChartSpec, report: StatReport) -> Tuple[List[Insight], int]:
        visual = gen_visual_insight(spec)
        statistics = gen_stats_insight(spec, report)
        task = gen_task_insight(spec, visual)
        if self.endpoint is None:
            return [visual, statistics, task], 0
        results = [self._complete(level, spec, report, fallback)
                   for level, fallback in ((InsightLevel.VISUAL, visual),
                                           (InsightLevel.STATISTICS, statistics),
                                           (InsightLevel.TASK, task))]
        return [insight for insight, _ in results], sum(ok for _, ok in results)

    def synthesize_all(self, charts: Sequence[ChartSpec]) -> Tuple[List[Insight], SynthesisReport]:
        """
        Produce exactly three insights per chart.

        Charts whose statistics cannot be computed are skipped and listed
        in the returned report.

        Returns:
            Tuple of (insights ordered like the charts, report).
        """
        summary = SynthesisReport(n_charts=len(charts))
        reports: Dict[str, StatReport] = {}
        usable: List[ChartSpec] = []
        for spec in charts:
            try:
                reports[spec.id] = run_stat_tasks(spec)
                usable.append(spec)
            except ChartsemError as e:
                logger.warning(f"Skipping chart {spec.id}: {e}")
                summary.skipped.append((spec.id, str(e)))

        if self.endpoint is None:
            per_chart = [self._generate_chart(spec, reports[spec.id]) for spec in usable]
        else:
            workers = max(1, self.endpoint.concurrency)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                per_chart = list(pool.map(lambda s: self._generate_chart(s, reports[s.id]), usable))

        insights: List[Insight] = []
        for chart_insights, generated in per_chart:
            insights.extend(chart_insights)
            summary.n_generated += generated
        summary.n_insights = len(insights)
        if self.endpoint is not None:
            summary.n_fallbacks = summary.n_insights - summary.n_generated
        logger.info(f"Synthesized {summary.n_insights} insights for {len(usable)} charts "
                    f"({len(summary.skipped)} skipped, {summary.n_generated} from the endpoint)")
        return insights, summary


def synthesize_all(charts: Sequence[ChartSpec],
                   endpoint: Optional[EndpointConfig] = None) -> Tuple[List[Insight], SynthesisReport]:
    return InsightManager(endpoint).synthesize_all(charts)
