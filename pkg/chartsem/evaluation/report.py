"""
Report tables for chartsem.

Metrics are shown x100 with two decimals. Tables are pandas DataFrames of
strings, written as CSV and as Markdown.
"""

import logging
import os
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from ..core.types import ALL_LEVELS, EvalReport, QueryKind
from .experiments import AblationRow, EncoderComparisonRow
from .harness import EvalResult
from .metrics import MetricConfig, rank_triple

logger = logging.getLogger(__name__)

CHECK = "✓"
LEVEL_COLUMNS = ("Visual", "Statistics", "Task")


def pct(value: float) -> str:
    return f"{value * 100:.2f}"


def _kind_label(kind: QueryKind) -> str:
    return "Precise" if kind == QueryKind.PRECISE else "Fuzzy"


def _full_columns(metrics: MetricConfig) -> List[str]:
    columns = ["Run"]
    for kind in (QueryKind.PRECISE, QueryKind.FUZZY):
        label = _kind_label(kind)
        columns += [f"{label} R@{k}" for k in metrics.k_list]
        columns += [f"{label} MRR@{metrics.k_rank}", f"{label} NDCG@{metrics.k_rank}"]
    return columns + ["Overall"]


def _full_cells(report: EvalReport, metrics: MetricConfig) -> List[str]:
    cells = [pct(report.r_at.get(k, 0.0)) for k in metrics.k_list]
    return cells + [pct(report.mrr_at_10), pct(report.ndcg_at_10)]


def results_frame(results: Sequence[EvalResult], metrics: Optional[MetricConfig] = None) -> pd.DataFrame:
    """One row per run: every cut-off for both query kinds, then Overall."""
    metrics = metrics or MetricConfig()
    rows = []
    for result in results:
        rows.append([result.tag, *_full_cells(result.precise, metrics),
                     *_full_cells(result.fuzzy, metrics), pct(result.overall)])
    return pd.DataFrame(rows, columns=_full_columns(metrics), dtype=object)


def _rank_columns(k_rank: int) -> List[str]:
    return [f"{_kind_label(kind)} {name}@{k_rank}"
            for kind in (QueryKind.PRECISE, QueryKind.FUZZY) for name in ("R", "MRR", "NDCG")]


def ablation_frame(rows: Sequence[AblationRow], k_rank: int = 10) -> pd.DataFrame:
    """Checkmark columns for the three insight levels, the six rank metrics and Overall."""
    data = []
    for row in rows:
        flags = [CHECK if level in row.levels else "" for level in ALL_LEVELS]
        values = [pct(v) for kind in (QueryKind.PRECISE, QueryKind.FUZZY)
                  for v in rank_triple(row.result.by_kind()[kind], k_rank)]
        data.append([*flags, *values, pct(row.result.overall)])
    return pd.DataFrame(data, columns=[*LEVEL_COLUMNS, *_rank_columns(k_rank), "Overall"], dtype=object)


def encoder_frame(rows: Sequence[EncoderComparisonRow], k_rank: int = 10) -> pd.DataFrame:
    data = []
    for row in rows:
        for stage, result in (("untrained", row.untrained), ("insights", row.trained)):
            values = [pct(v) for kind in (QueryKind.PRECISE, QueryKind.FUZZY)
                      for v in rank_triple(result.by_kind()[kind], k_rank)]
            data.append([row.variant.name, row.variant.dim, stage, *values, pct(result.overall)])
    return pd.DataFrame(data, columns=["Encoder", "Dim", "Training", *_rank_columns(k_rank), "Overall"],
                        dtype=object)


def deltas_frame(deltas: pd.DataFrame) -> pd.DataFrame:
    """Format a metric_deltas table for display."""
    shown = deltas.copy()
    for column in shown.columns[2:]:
        shown[column] = shown[column].map(pct)
    return shown.astype(object)


def to_markdown(frame: pd.DataFrame) -> str:
    columns = [str(c) for c in frame.columns]
    lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
    for row in frame.itertuples(index=False):
        lines.append("| " + " | ".join(str(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


def render_report(results: Sequence[EvalResult], metrics: Optional[MetricConfig] = None) -> Tuple[str, str]:
    """
    Render evaluation results as (Markdown, CSV).

    An empty result list renders the header only.
    """
    frame = results_frame(results, metrics)
    return to_markdown(frame), frame.to_csv(index=False, lineterminator='\n')


def write_tables(frame: pd.DataFrame, out_dir: str, name: str) -> Tuple[str, str]:
    """Write <name>.csv and <name>.md under out_dir; returns both paths."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{name}.csv")
    md_path = os.path.join(out_dir, f"{name}.md")
    frame.to_csv(csv_path, index=False, lineterminator='\n')
    with open(md_path, 'w', encoding='utf-8') as f:
        f.write(to_markdown(frame))
    logger.info(f"Wrote report {csv_path} and {md_path}")
    return csv_path, md_path
