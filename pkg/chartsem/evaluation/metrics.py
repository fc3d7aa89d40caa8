"""
Ranking metrics for chartsem.

Every query has exactly one relevant chart, so relevance is binary and the
ideal DCG is 1:
    recall@k = 1 if rank <= k
    MRR@k    = 1 / rank if rank <= k
    NDCG@k   = 1 / log2(1 + rank) if rank <= k
Aggregates are arithmetic means over queries, taken in query id order.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from ..core.types import EvalReport, RankedList
from ..errors import ConfigError


@dataclass(frozen=True)
class MetricConfig:
    k_list: Tuple[int, ...] = (1, 5, 10)
    k_rank: int = 10

    def validate(self):
        if not self.k_list or any(k < 1 for k in self.k_list) or self.k_rank < 1:
            raise ConfigError(f"metric cut-offs must be >= 1, got {self.k_list} / {self.k_rank}")
        if list(self.k_list) != sorted(set(self.k_list)):
            raise ConfigError(f"k_list must be strictly ascending, got {self.k_list}")

    @property
    def depth(self) -> int:
        """Search depth needed to compute every metric."""
        return max(max(self.k_list), self.k_rank)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricConfig":
        config = cls(k_list=tuple(int(k) for k in data.get("k_list", (1, 5, 10))),
                     k_rank=int(data.get("k_rank", 10)))
        config.validate()
        return config


def rank_of_target(ranked: RankedList, target_id: str) -> Optional[int]:
    for position, (chart, _) in enumerate(ranked.entries, start=1):
        if chart == target_id:
            return position
    return None


def recall_at_k(rank: Optional[int], k: int) -> int:
    return 1 if rank is not None and rank <= k else 0


def mrr_contrib(rank: Optional[int], k: int) -> float:
    return 1.0 / rank if rank is not None and rank <= k else 0.0


def ndcg_contrib(rank: Optional[int], k: int) -> float:
    return 1.0 / math.log2(1 + rank) if rank is not None and rank <= k else 0.0


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else 0.0


def aggregate(ranks: Mapping[str, Optional[int]], config: MetricConfig, tag: str = "") -> EvalReport:
    """
    Mean metrics over queries.

    The report's overall is the mean of its own recall@k_rank, MRR and NDCG.
    An empty query set gives all-zero metrics.
    """
    ordered = [ranks[qid] for qid in sorted(ranks)]
    cutoffs = sorted(set(config.k_list) | {config.k_rank})
    r_at = {k: _mean([recall_at_k(r, k) for r in ordered]) for k in cutoffs}
    mrr = _mean([mrr_contrib(r, config.k_rank) for r in ordered])
    ndcg = _mean([ndcg_contrib(r, config.k_rank) for r in ordered])
    return EvalReport(
        per_query_rank={qid: ranks[qid] for qid in sorted(ranks)},
        r_at=r_at,
        mrr_at_10=mrr,
        ndcg_at_10=ndcg,
        overall=_mean([r_at[config.k_rank], mrr, ndcg]) if ordered else 0.0,
        config_tag=tag,
    )


def rank_triple(report: EvalReport, k_rank: int = 10) -> Tuple[float, float, float]:
    """(R@k_rank, MRR, NDCG) of a report."""
    return report.r_at.get(k_rank, 0.0), report.mrr_at_10, report.ndcg_at_10


def overall(values: Sequence[float]) -> float:
    """
    Overall score: arithmetic mean of the rank metrics of every query kind.

    Called with the six numbers (R@10, MRR@10, NDCG@10) x (precise, fuzzy).
    """
    return _mean(list(values))


def overall_of(reports: Sequence[EvalReport], k_rank: int = 10) -> float:
    """Overall over per-kind reports; kinds without queries are left out."""
    values = [v for report in reports if report.n_queries for v in rank_triple(report, k_rank)]
    return overall(values)
