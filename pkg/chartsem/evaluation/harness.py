"""
Evaluation harness for chartsem.

Embeds benchmark queries, searches the chart index and reports ranking
metrics per query kind plus a combined report.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from ..core.types import EmbeddingVector, EvalReport, QueryKind, TextQuery
from ..encoder.feature_bank import FeatureBank
from ..encoder.model import DualEncoderModel, embed_texts
from ..encoder.preprocess import DIRECT_RESIZE, PreprocessMode
from ..errors import DimensionMismatchError, ValidationError
from ..retrieval.index import VectorIndex, batch_search, build_index_from_matrix
from .metrics import MetricConfig, aggregate, overall_of, rank_of_target

logger = logging.getLogger(__name__)


@dataclass
class EvalResult:
    """Reports of one evaluation run."""

    precise: EvalReport
    fuzzy: EvalReport
    combined: EvalReport

    @property
    def overall(self) -> float:
        return self.combined.overall

    @property
    def tag(self) -> str:
        return self.combined.config_tag

    def by_kind(self) -> Dict[QueryKind, EvalReport]:
        return {QueryKind.PRECISE: self.precise, QueryKind.FUZZY: self.fuzzy}


def chart_index(model: DualEncoderModel, bank: FeatureBank,
                mode: PreprocessMode = DIRECT_RESIZE) -> VectorIndex:
    """Index every chart of the bank with the model's chart tower."""
    return build_index_from_matrix(bank.chart_ids, model.embed_chart_matrix(bank.chart_matrix(mode)))


def evaluate_vectors(index: VectorIndex, queries: Sequence[TextQuery], vectors: Sequence[EmbeddingVector],
                     config: MetricConfig, tag: str = "") -> EvalResult:
    """
    Evaluate pre-embedded queries against an index.

    Raises:
        ValidationError: If a query's target chart is not in the index.
        DimensionMismatchError: If query and index dims differ.
    """
    config.validate()
    if len(vectors) != len(queries):
        raise DimensionMismatchError(f"{len(queries)} queries but {len(vectors)} query vectors")
    indexed = set(index.ids)
    missing = sorted(q.id for q in queries if q.target_chart_id not in indexed)
    if missing:
        raise ValidationError("query targets are missing from the index", missing)

    ranked = batch_search(index, list(vectors), config.depth, [q.id for q in queries]) if queries else []
    ranks = {q.id: rank_of_target(r, q.target_chart_id) for q, r in zip(queries, ranked)}

    per_kind: List[EvalReport] = []
    for kind in (QueryKind.PRECISE, QueryKind.FUZZY):
        subset = {q.id: ranks[q.id] for q in queries if q.kind == kind}
        per_kind.append(aggregate(subset, config, f"{tag}/{kind.value}" if tag else kind.value))
    combined = aggregate(ranks, config, tag)
    combined.overall = overall_of(per_kind, config.k_rank)

    logger.info(f"Evaluated {len(queries)} queries [{tag or 'untagged'}]: "
                f"R@{config.k_rank} {combined.r_at.get(config.k_rank, 0.0):.4f}, overall {combined.overall:.4f}")
    return EvalResult(per_kind[0], per_kind[1], combined)


def evaluate(index: VectorIndex, queries: Sequence[TextQuery], model: DualEncoderModel,
             config: Optional[MetricConfig] = None, tag: str = "") -> EvalResult:
    """
    Evaluate a dual encoder on benchmark queries.

    Args:
        index: Chart index built with the same model's chart tower.
        queries: Accepted benchmark queries.
        model: Encoder whose text tower embeds the queries.
        config: Metric cut-offs.
        tag: Label carried by the reports.

    Returns:
        EvalResult with precise, fuzzy and combined reports.
    """
    config = config or MetricConfig()
    vectors = embed_texts(model, [q.text for q in queries])
    return evaluate_vectors(index, queries, vectors, config, tag)
