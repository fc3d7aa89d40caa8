"""
Experiment runners for chartsem.

Insight ablation, preprocessing comparison, text-to-OCR baseline, encoder
variants and long-caption retrieval, all on one shared FeatureBank.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..core.types import ALL_LEVELS, ChartSpec, Insight, InsightLevel, QueryKind, TextQuery
from ..encoder.feature_bank import FeatureBank
from ..encoder.features import text_features
from ..encoder.model import DualEncoderModel, embed_texts
from ..encoder.preprocess import CENTER_CROP, DIRECT_RESIZE, PreprocessMode
from ..retrieval.index import build_index_from_matrix
from ..training.trainer import TrainConfig, init_model, train
from .harness import EvalResult, chart_index, evaluate, evaluate_vectors
from .metrics import MetricConfig, rank_triple

logger = logging.getLogger(__name__)

V, S, T = ALL_LEVELS

# Untrained baseline, singletons, pairs, then all three.
ABLATION_ROWS: Tuple[Tuple[InsightLevel, ...], ...] = (
    (), (V,), (S,), (T,), (V, T), (V, S), (S, T), (V, S, T),
)

LONG_CAPTION_LEVELS = (InsightLevel.VISUAL, InsightLevel.STATISTICS)


def evaluate_model(model: DualEncoderModel, bank: FeatureBank, queries: Sequence[TextQuery],
                   mode: PreprocessMode, metrics: MetricConfig, tag: str) -> EvalResult:
    return evaluate(chart_index(model, bank, mode), queries, model, metrics, tag)


@dataclass
class AblationRow:
    levels: Tuple[InsightLevel, ...]
    result: EvalResult

    @property
    def tag(self) -> str:
        return '+'.join(level.value for level in self.levels) or 'untrained'


def run_ablation(bank: FeatureBank, insights: Sequence[Insight], queries: Sequence[TextQuery],
                 base_config: TrainConfig, metrics: Optional[MetricConfig] = None,
                 jobs: int = 1) -> List[AblationRow]:
    """
    Train one model per insight-level combination and evaluate each.

    Every row starts from the same seeded initialization; the first row
    evaluates that initialization untrained.

    Args:
        bank: Features of the corpus charts.
        insights: Corpus insights covering all three levels.
        queries: Benchmark queries.
        base_config: Training settings shared by all rows (levels are replaced).
        metrics: Metric cut-offs.
        jobs: Rows trained in parallel.

    Returns:
        Eight rows in ablation order.
    """
    metrics = metrics or MetricConfig()
    mode = base_config.preprocess
    bank.chart_matrix(mode)

    def one(levels: Tuple[InsightLevel, ...]) -> AblationRow:
        row_tag = '+'.join(level.value for level in levels) or 'untrained'
        if levels:
            model, _ = train(bank.charts, insights, replace(base_config, levels=frozenset(levels)), bank=bank)
        else:
            model = init_model(base_config)
        return AblationRow(levels, evaluate_model(model, bank, queries, mode, metrics, f"ablation/{row_tag}"))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, ABLATION_ROWS))
    else:
        rows = [one(levels) for levels in ABLATION_ROWS]
    for row in rows:
        logger.info(f"Ablation {row.tag}: overall {row.result.overall:.4f}")
    return rows


def ocr_baseline(bank: FeatureBank, queries: Sequence[TextQuery], model: DualEncoderModel,
                 metrics: Optional[MetricConfig] = None, mode: PreprocessMode = DIRECT_RESIZE) -> EvalResult:
    """
    Text-to-OCR retrieval: the text tower embeds both the queries and the
    text read from each rendered chart. A chart with no readable text gets
    the sentinel embedding.
    """
    metrics = metrics or MetricConfig()
    texts = bank.ocr_texts(mode)
    index = build_index_from_matrix(bank.chart_ids, model.embed_text_matrix(text_features(texts)))
    empty = sum(1 for t in texts if not t.strip())
    if empty:
        logger.info(f"{empty} charts have no OCR text at {mode.tag}")
    return evaluate_vectors(index, queries, embed_texts(model, [q.text for q in queries]), metrics, "text_to_ocr")


def metric_deltas(first: EvalResult, second: EvalResult, k_rank: int = 10) -> pd.DataFrame:
    """One row per (kind, metric): first, second and second - first."""
    rows = []
    names = (f"R@{k_rank}", f"MRR@{k_rank}", f"NDCG@{k_rank}")
    for kind in (QueryKind.PRECISE, QueryKind.FUZZY):
        a = rank_triple(first.by_kind()[kind], k_rank)
        b = rank_triple(second.by_kind()[kind], k_rank)
        for name, x, y in zip(names, a, b):
            rows.append((kind.value, name, x, y, y - x))
    rows.append(('all', 'Overall', first.overall, second.overall, second.overall - first.overall))
    return pd.DataFrame(rows, columns=['kind', 'metric', first.tag, second.tag, 'delta'])


@dataclass
class PreprocessComparison:
    resize: EvalResult
    crop: EvalResult
    deltas: pd.DataFrame


def compare_preprocess(bank: FeatureBank, insights: Sequence[Insight], queries: Sequence[TextQuery],
                       base_config: TrainConfig, metrics: Optional[MetricConfig] = None) -> PreprocessComparison:
    """Train and evaluate two models that differ only in preprocessing."""
    metrics = metrics or MetricConfig()
    results: Dict[str, EvalResult] = {}
    for mode in (DIRECT_RESIZE, CENTER_CROP):
        config = replace(base_config, preprocess=mode)
        model, _ = train(bank.charts, insights, config, bank=bank)
        results[mode.tag] = evaluate_model(model, bank, queries, mode, metrics, f"preprocess/{mode.tag}")
    resize, crop = results[DIRECT_RESIZE.tag], results[CENTER_CROP.tag]
    return PreprocessComparison(resize, crop, metric_deltas(resize, crop, metrics.k_rank))


@dataclass(frozen=True)
class EncoderVariant:
    name: str
    dim: int
    tau: float


DEFAULT_VARIANTS = (
    EncoderVariant('dual-64', 64, 0.07),
    EncoderVariant('dual-128', 128, 0.07),
    EncoderVariant('dual-256', 256, 0.05),
)


@dataclass
class EncoderComparisonRow:
    variant: EncoderVariant
    untrained: EvalResult
    trained: EvalResult
    deltas: pd.DataFrame


def run_encoder_comparison(bank: FeatureBank, insights: Sequence[Insight], queries: Sequence[TextQuery],
                           base_config: TrainConfig, variants: Sequence[EncoderVariant] = DEFAULT_VARIANTS,
                           metrics: Optional[MetricConfig] = None) -> List[EncoderComparisonRow]:
    """
    For each encoder variant, compare the untrained model with the same
    model trained on all insight levels.
    """
    metrics = metrics or MetricConfig()
    mode = base_config.preprocess
    rows = []
    for variant in variants:
        config = replace(base_config, dim=variant.dim, tau=variant.tau, levels=frozenset(ALL_LEVELS))
        untrained = evaluate_model(init_model(config), bank, queries, mode, metrics, f"{variant.name}/untrained")
        model, _ = train(bank.charts, insights, config, bank=bank)
        trained = evaluate_model(model, bank, queries, mode, metrics, f"{variant.name}/insights")
        rows.append(EncoderComparisonRow(variant, untrained, trained,
                                         metric_deltas(untrained, trained, metrics.k_rank)))
        logger.info(f"Encoder {variant.name}: overall {untrained.overall:.4f} -> {trained.overall:.4f}")
    return rows


def caption_queries(charts: Sequence[ChartSpec], insights: Sequence[Insight],
                    level: InsightLevel) -> List[TextQuery]:
    """One long query per chart: that chart's own insight of the given level."""
    chart_ids = {c.id for c in charts}
    return [TextQuery(f"{i.chart_id}-{level.value}", i.text, QueryKind.PRECISE, i.chart_id, "")
            for i in sorted(insights, key=lambda i: i.chart_id)
            if i.level == level and i.chart_id in chart_ids]


def long_caption_eval(bank: FeatureBank, insights: Sequence[Insight], model: DualEncoderModel,
                      metrics: Optional[MetricConfig] = None, levels: Sequence[InsightLevel] = LONG_CAPTION_LEVELS,
                      mode: PreprocessMode = DIRECT_RESIZE) -> Dict[InsightLevel, EvalResult]:
    """
    Long-caption retrieval against the full chart index, one run per level
    (visual insights as short descriptions, statistics insights as analytical
    captions).
    """
    metrics = metrics or MetricConfig()
    index = chart_index(model, bank, mode)
    results = {}
    for level in levels:
        queries = caption_queries(bank.charts, insights, level)
        results[level] = evaluate(index, queries, model, metrics, f"long_caption/{level.value}")
    return results
