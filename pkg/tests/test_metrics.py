import math

import numpy as np
import pytest

from chartsem.core.types import RankedList
from chartsem.errors import ConfigError
from chartsem.evaluation.metrics import (
    MetricConfig,
    aggregate,
    mrr_contrib,
    ndcg_contrib,
    overall,
    overall_of,
    rank_of_target,
    rank_triple,
    recall_at_k,
)

# Reference ablation rows: R@10, MRR@10, NDCG@10 for precise then fuzzy
# queries, followed by the expected Overall.
ABLATION_FIXTURES = [
    ((62.56, 37.99, 43.90, 51.91, 30.29, 35.33), 43.66),
    # Listed as 46.67; the six values average to 46.76.
    ((69.64, 44.39, 48.69, 56.28, 27.27, 34.29), 46.76),
    ((66.15, 45.18, 50.18, 57.25, 32.75, 38.60), 48.35),
    ((65.64, 44.44, 49.52, 58.78, 32.24, 38.59), 48.20),
    ((71.79, 44.96, 51.40, 60.31, 35.24, 41.17), 50.81),
    ((66.15, 43.26, 48.74, 54.96, 32.20, 37.66), 47.16),
    ((65.64, 43.53, 48.87, 54.96, 30.44, 36.23), 46.61),
    ((70.26, 49.30, 61.30, 61.83, 38.96, 44.41), 54.34),
]


def test_closed_form_example():
    report = aggregate({"q1": 1, "q2": 3, "q3": None}, MetricConfig())
    assert report.mrr_at_10 == pytest.approx((1 + 1 / 3) / 3)
    assert report.ndcg_at_10 == pytest.approx((1 + 1 / math.log2(4)) / 3)
    assert report.ndcg_at_10 == pytest.approx(0.5)
    assert report.r_at == {1: pytest.approx(1 / 3), 5: pytest.approx(2 / 3), 10: pytest.approx(2 / 3)}
    assert report.overall == pytest.approx((2 / 3 + 4 / 9 + 0.5) / 3)


def test_per_query_contributions():
    assert recall_at_k(10, 10) == 1
    assert recall_at_k(11, 10) == 0
    assert recall_at_k(None, 10) == 0
    assert mrr_contrib(4, 10) == 0.25
    assert mrr_contrib(11, 10) == 0.0
    assert ndcg_contrib(1, 10) == 1.0
    assert ndcg_contrib(3, 10) == pytest.approx(0.5)
    assert ndcg_contrib(None, 10) == 0.0


def test_rank_of_target():
    ranked = RankedList("q", (("c-a", 0.9), ("c-b", 0.8), ("c-c", 0.7)), 10)
    assert rank_of_target(ranked, "c-b") == 2
    assert rank_of_target(ranked, "c-z") is None


def test_empty_query_set_gives_zeros():
    report = aggregate({}, MetricConfig())
    assert report.mrr_at_10 == 0.0
    assert report.ndcg_at_10 == 0.0
    assert report.overall == 0.0
    assert all(v == 0.0 for v in report.r_at.values())
    assert overall_of([report]) == 0.0


def test_aggregate_is_independent_of_insertion_order():
    ranks = {f"q{i}": (i % 12) or None for i in range(40)}
    shuffled = dict(reversed(list(ranks.items())))
    assert aggregate(ranks, MetricConfig()) == aggregate(shuffled, MetricConfig())


def test_improving_ranks_never_lowers_metrics():
    rng = np.random.default_rng(0)
    config = MetricConfig()
    for _ in range(1000):
        n = int(rng.integers(1, 20))
        ranks = [int(r) if r <= 15 else None for r in rng.integers(1, 20, size=n)]
        better = [max(1, r - int(rng.integers(0, 4))) if r is not None else
                  (int(rng.integers(1, 15)) if rng.random() < 0.3 else None) for r in ranks]
        before = aggregate({f"q{i}": r for i, r in enumerate(ranks)}, config)
        after = aggregate({f"q{i}": r for i, r in enumerate(better)}, config)
        for k in config.k_list:
            assert after.r_at[k] >= before.r_at[k]
        assert after.mrr_at_10 >= before.mrr_at_10
        assert after.ndcg_at_10 >= before.ndcg_at_10
        assert after.overall >= before.overall - 1e-12


@pytest.mark.parametrize("values, expected", ABLATION_FIXTURES)
def test_overall_reproduces_reference_rows(values, expected):
    assert overall(values) == pytest.approx(expected, abs=0.01)


def test_overall_of_uses_both_kinds():
    config = MetricConfig()
    precise = aggregate({"a-p": 1, "b-p": 2}, config)
    fuzzy = aggregate({"a-f": None, "b-f": 4}, config)
    expected = (sum(rank_triple(precise)) + sum(rank_triple(fuzzy))) / 6
    assert overall_of([precise, fuzzy]) == pytest.approx(expected)
    assert overall_of([precise, aggregate({}, config)]) == pytest.approx(sum(rank_triple(precise)) / 3)


@pytest.mark.parametrize("k_list, k_rank", [((), 10), ((0, 5), 10), ((5, 1), 10), ((1, 1), 10), ((1, 5), 0)])
def test_metric_config_validation(k_list, k_rank):
    with pytest.raises(ConfigError):
        MetricConfig(k_list, k_rank).validate()


def test_metric_config_depth_and_extra_cutoff():
    config = MetricConfig.from_dict({"k_list": [1, 3], "k_rank": 20})
    assert config.depth == 20
    report = aggregate({"q": 15}, config)
    assert report.r_at == {1: 0.0, 3: 0.0, 20: 1.0}
    assert report.mrr_at_10 == pytest.approx(1 / 15)


def test_cutoff_and_metric_ordering_on_random_rankings():
    rng = np.random.default_rng(1)
    config = MetricConfig()
    for _ in range(1000):
        n = int(rng.integers(1, 30))
        ranks = {f"q{i}": (int(r) if r <= 12 else None) for i, r in enumerate(rng.integers(1, 16, size=n))}
        report = aggregate(ranks, config)
        assert report.r_at[1] <= report.r_at[5] <= report.r_at[10]
        assert report.ndcg_at_10 >= report.mrr_at_10
        assert report.mrr_at_10 <= report.r_at[10]
