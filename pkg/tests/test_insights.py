from dataclasses import replace

import numpy as np
import pytest

from chartsem.core.types import ChartType, InsightLevel, Provenance, Series
from chartsem.core.validation import validate_corpus
from chartsem.errors import DependencyError, InsufficientDataError, ServiceError
from chartsem.insights.generative import EndpointConfig, build_insight_prompt, extract_text
from chartsem.insights.insight_manager import InsightManager
from chartsem.insights.stats import Trend, run_stat_tasks
from chartsem.insights.templates import gen_stats_insight, gen_task_insight, gen_visual_insight
from chartsem.utils import http_client
from chartsem.utils.formatting import format_sig
from chartsem.utils.http_client import post_json, with_retries
from helpers import make_chart

GENERATED = ("This generated insight describes the chart in enough words to be useful and "
             "keeps going for a while so that the text reads like a real paragraph.")


def _line(values):
    points = tuple((f"{2000 + i}", float(v)) for i, v in enumerate(values))
    return make_chart("c1", ChartType.LINE, points=points, x_name="year")


def test_increasing_trend_and_extremes():
    report = run_stat_tasks(_line([1, 2, 3, 5, 8]))
    assert report.trend == Trend.INCREASING
    assert report.argmax == "2004"
    assert report.max_value == 8.0
    assert report.argmin == "2000"
    assert report.range_lo == 1.0
    assert report.mean == pytest.approx(3.8)
    assert report.median == 3.0
    assert report.top_categories == ("2004", "2003", "2002")
    assert report.n_points == 5


def test_flat_series():
    report = run_stat_tasks(_line([4, 4, 4, 4]))
    assert report.trend == Trend.FLAT
    assert report.anomalies == ()
    assert report.skew_sign == 0
    assert report.stddev == 0.0


def test_anomaly_detection():
    report = run_stat_tasks(_line([1] * 19 + [100]))
    assert [i for i, _ in report.anomalies] == [19]
    assert report.anomaly_labels == ("2019",)
    assert report.skew_sign == 1


def test_scatter_correlation():
    points = tuple((float(x), 2.0 * x + 1.0) for x in range(6))
    report = run_stat_tasks(make_chart("s1", ChartType.SCATTER, points=points))
    assert report.correlation == pytest.approx(1.0)


def test_two_series_correlation():
    series = (Series("a", (("x", 1.0), ("y", 2.0), ("z", 3.0))),
              Series("b", (("x", 3.0), ("y", 2.0), ("z", 1.0))))
    report = run_stat_tasks(make_chart("g1", ChartType.GROUPED_BAR, series=series, categories=("a", "b")))
    assert report.correlation == pytest.approx(-1.0)


def test_single_point_is_insufficient():
    with pytest.raises(InsufficientDataError):
        run_stat_tasks(_line([3]))


def test_format_sig():
    assert format_sig(120) == "120.0"
    assert format_sig(5) == "5.000"
    assert format_sig(0) == "0.0"


def test_templates_cover_three_levels():
    spec = _line([3, 1, 4, 1, 5, 9, 2, 6])
    visual = gen_visual_insight(spec)
    statistics = gen_stats_insight(spec, run_stat_tasks(spec))
    task = gen_task_insight(spec, visual)
    assert [i.level for i in (visual, statistics, task)] == [InsightLevel.VISUAL, InsightLevel.STATISTICS,
                                                             InsightLevel.TASK]
    assert validate_corpus([spec], [visual, statistics, task]) == []


def test_task_insight_restates_the_visual_lead_sentence():
    spec = _line([1, 2, 3])
    visual = gen_visual_insight(spec)
    lead = visual.text.split(" shows how ")[0]
    assert lead in gen_task_insight(spec, visual).text
    custom = replace(visual, text="This chart traces yearly output closely. It has more to say.")
    task = gen_task_insight(spec, custom).text
    assert "This chart traces yearly output closely." in task
    assert "It has more to say." not in task


def test_task_insight_needs_visual():
    spec = _line([1, 2, 3])
    with pytest.raises(DependencyError):
        gen_task_insight(spec, None)
    other = gen_visual_insight(make_chart("c2"))
    with pytest.raises(DependencyError):
        gen_task_insight(spec, other)


def test_three_insights_per_chart(small_charts):
    insights, report = InsightManager().synthesize_all(small_charts)
    kept = [c for c in small_charts if c.id not in {cid for cid, _ in report.skipped}]
    assert len(insights) == 3 * len(kept)
    assert report.n_insights == len(insights)
    assert validate_corpus(kept, insights) == []
    assert all(i.provenance == Provenance.TEMPLATE for i in insights)


def test_insight_prompts_carry_metadata():
    spec = _line([1, 2, 3])
    system, user = build_insight_prompt(InsightLevel.STATISTICS, spec, run_stat_tasks(spec))
    assert system
    assert spec.title in user
    assert "Trend: increasing" in user


def test_extract_text_shapes():
    assert extract_text({'choices': [{'message': {'content': ' hi '}}]}) == "hi"
    assert extract_text({'choices': [{'text': 'done'}]}) == "done"
    assert extract_text({'text': 'plain'}) == "plain"
    with pytest.raises(ServiceError):
        extract_text({'choices': [{'message': {'content': '   '}}]})
    with pytest.raises(ServiceError):
        extract_text({})


def test_with_retries_counts_attempts():
    calls = []

    def failing():
        calls.append(1)
        raise ServiceError("down")

    with pytest.raises(ServiceError):
        with_retries(failing, 3, "test call")
    assert len(calls) == 3


def test_generative_backend(stub_server):
    url, server = stub_server(lambda body: (200, {'choices': [{'message': {'content': GENERATED}}]}))
    charts = [_line([1, 2, 3, 4])]
    insights, report = InsightManager(EndpointConfig(url, timeout=5.0, concurrency=1)).synthesize_all(charts)
    assert [i.provenance for i in insights] == [Provenance.GENERATIVE_SERVICE] * 3
    assert all(i.text == GENERATED for i in insights)
    assert report.n_generated == 3
    assert report.n_fallbacks == 0
    assert len(server.requests) == 3
    assert server.requests[0]['messages'][0]['role'] == 'system'


def test_generative_failure_falls_back(stub_server):
    url, server = stub_server(lambda body: (500, {'error': 'overloaded'}))
    charts = [_line([1, 2, 3, 4])]
    insights, report = InsightManager(EndpointConfig(url, timeout=5.0, backoff=0.0, concurrency=1)).synthesize_all(charts)
    assert [i.provenance for i in insights] == [Provenance.TEMPLATE] * 3
    assert report.n_fallbacks == 3
    assert len(server.requests) == 9


def test_truncated_response_falls_back_to_templates(stub_server):
    url, server = stub_server(lambda body: (200, b'{"choices":', 500))
    charts = [_line([1, 2, 3, 4])]
    insights, report = InsightManager(EndpointConfig(url, timeout=5.0, attempts=1,
                                                     concurrency=1)).synthesize_all(charts)
    assert [i.provenance for i in insights] == [Provenance.TEMPLATE] * 3
    assert report.n_fallbacks == 3
    assert len(server.requests) == 3


def test_post_json_wraps_truncated_body(stub_server):
    url, _ = stub_server(lambda body: (200, b'{"text": "hi"', 500))
    with pytest.raises(ServiceError, match="unreachable"):
        post_json(url, {}, timeout=5.0)


def test_with_retries_doubles_the_wait_between_attempts(monkeypatch):
    waits = []
    monkeypatch.setattr(http_client.time, "sleep", waits.append)

    def failing():
        raise ServiceError("down")

    with pytest.raises(ServiceError):
        with_retries(failing, 3, "test call", backoff=0.5)
    assert waits == [0.5, 1.0]


def test_with_retries_does_not_wait_after_success(monkeypatch):
    waits = []
    monkeypatch.setattr(http_client.time, "sleep", waits.append)
    outcomes = iter([ServiceError("down"), "ok"])

    def flaky():
        outcome = next(outcomes)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome

    assert with_retries(flaky, 3, "test call", backoff=0.25) == "ok"
    assert waits == [0.25]


@pytest.mark.parametrize("seed", range(20))
def test_correlation_matches_two_pass_covariance(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=30)
    y = 0.4 * x + rng.normal(size=30)
    points = tuple((float(a), float(b)) for a, b in zip(x, y))
    report = run_stat_tasks(make_chart("s1", ChartType.SCATTER, points=points))
    dx, dy = x - x.mean(), y - y.mean()
    expected = np.sum(dx * dy) / np.sqrt(np.sum(dx * dx) * np.sum(dy * dy))
    assert abs(report.correlation - expected) <= 1e-12
