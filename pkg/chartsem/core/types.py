"""
Domain types for chartsem.

Every module shares these records. They are immutable after construction and
serialize to plain dicts whose key order is the field order, which keeps the
JSON Lines files stable across runs.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

XValue = Union[str, float]
Cell = Union[str, float]


class ColumnKind(str, Enum):
    CATEGORICAL = "categorical"
    NUMERIC = "numeric"
    TEMPORAL = "temporal"


class ChartType(str, Enum):
    BAR = "bar"
    PIE = "pie"
    LINE = "line"
    SCATTER = "scatter"
    GROUPED_LINE = "grouped_line"
    STACKED_BAR = "stacked_bar"
    GROUPED_BAR = "grouped_bar"


LINE_FAMILY = (ChartType.LINE, ChartType.GROUPED_LINE, ChartType.SCATTER)
BAR_FAMILY = (ChartType.BAR, ChartType.GROUPED_BAR, ChartType.STACKED_BAR)


class LineStyle(str, Enum):
    SOLID = "solid"
    DASHED = "dashed"
    DOTTED = "dotted"


class Marker(str, Enum):
    CIRCLE = "circle"
    SQUARE = "square"
    TRIANGLE = "triangle"
    NONE = "none"


class PieVariant(str, Enum):
    PIE = "pie"
    DONUT = "donut"


class InsightLevel(str, Enum):
    VISUAL = "visual"
    STATISTICS = "statistics"
    TASK = "task"


class Provenance(str, Enum):
    TEMPLATE = "template"
    GENERATIVE_SERVICE = "generative_service"


class QueryKind(str, Enum):
    PRECISE = "precise"
    FUZZY = "fuzzy"


class GroupStatus(str, Enum):
    CANDIDATE = "candidate"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class PreprocessKind(str, Enum):
    DIRECT_RESIZE = "direct_resize"
    CENTER_CROP = "center_crop"


ALL_LEVELS = (InsightLevel.VISUAL, InsightLevel.STATISTICS, InsightLevel.TASK)


@dataclass(frozen=True)
class Column:
    name: str
    kind: ColumnKind

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Column":
        return cls(name=data["name"], kind=ColumnKind(data["kind"]))


@dataclass(frozen=True)
class Table:
    """A cleaned source table (no missing cells)."""

    id: str
    columns: Tuple[Column, ...]
    rows: Tuple[Tuple[Cell, ...], ...]
    theme: str = ""

    def column_index(self, name: str) -> int:
        for i, column in enumerate(self.columns):
            if column.name == name:
                return i
        raise KeyError(name)

    def column_values(self, name: str) -> List[Cell]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]

    def columns_of(self, kind: ColumnKind) -> List[Column]:
        return [c for c in self.columns if c.kind == kind]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "columns": [c.to_dict() for c in self.columns],
            "rows": [list(row) for row in self.rows],
            "theme": self.theme,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Table":
        return cls(
            id=data["id"],
            columns=tuple(Column.from_dict(c) for c in data["columns"]),
            rows=tuple(tuple(row) for row in data["rows"]),
            theme=data.get("theme", ""),
        )


@dataclass(frozen=True)
class StyleParams:
    palette_id: int = 0
    line_style: LineStyle = LineStyle.SOLID
    marker: Marker = Marker.NONE
    pie_variant: PieVariant = PieVariant.PIE
    canvas_w: int = 800
    canvas_h: int = 500
    title_band_frac: float = 0.08
    margin_frac: float = 0.10
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "palette_id": self.palette_id,
            "line_style": self.line_style.value,
            "marker": self.marker.value,
            "pie_variant": self.pie_variant.value,
            "canvas_w": self.canvas_w,
            "canvas_h": self.canvas_h,
            "title_band_frac": self.title_band_frac,
            "margin_frac": self.margin_frac,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StyleParams":
        return cls(
            palette_id=int(data["palette_id"]),
            line_style=LineStyle(data["line_style"]),
            marker=Marker(data["marker"]),
            pie_variant=PieVariant(data["pie_variant"]),
            canvas_w=int(data["canvas_w"]),
            canvas_h=int(data["canvas_h"]),
            title_band_frac=float(data["title_band_frac"]),
            margin_frac=float(data["margin_frac"]),
            seed=int(data["seed"]),
        )


@dataclass(frozen=True)
class Series:
    """One data series; category is "" for single-series charts."""

    category: str
    points: Tuple[Tuple[XValue, float], ...]

    @property
    def x_values(self) -> List[XValue]:
        return [p[0] for p in self.points]

    @property
    def y_values(self) -> List[float]:
        return [p[1] for p in self.points]

    def to_dict(self) -> Dict[str, Any]:
        return {"category": self.category, "points": [[x, y] for x, y in self.points]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Series":
        return cls(
            category=data["category"],
            points=tuple((x, y) for x, y in data["points"]),
        )


@dataclass(frozen=True)
class ChartSpec:
    """Full structured description of one chart (its metadata)."""

    id: str
    chart_type: ChartType
    title: str
    subtitle: str
    x_name: str
    y_name: str
    categories: Tuple[str, ...]
    series: Tuple[Series, ...]
    style: StyleParams
    source_table_id: str
    svg_path: str
    theme: str = ""

    @property
    def primary(self) -> Series:
        return self.series[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "chart_type": self.chart_type.value,
            "title": self.title,
            "subtitle": self.subtitle,
            "x_name": self.x_name,
            "y_name": self.y_name,
            "categories": list(self.categories),
            "series": [s.to_dict() for s in self.series],
            "style": self.style.to_dict(),
            "source_table_id": self.source_table_id,
            "svg_path": self.svg_path,
            "theme": self.theme,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChartSpec":
        return cls(
            id=data["id"],
            chart_type=ChartType(data["chart_type"]),
            title=data["title"],
            subtitle=data["subtitle"],
            x_name=data["x_name"],
            y_name=data["y_name"],
            categories=tuple(data["categories"]),
            series=tuple(Series.from_dict(s) for s in data["series"]),
            style=StyleParams.from_dict(data["style"]),
            source_table_id=data["source_table_id"],
            svg_path=data["svg_path"],
            theme=data.get("theme", ""),
        )


@dataclass(frozen=True)
class Insight:
    chart_id: str
    level: InsightLevel
    text: str
    provenance: Provenance = Provenance.TEMPLATE

    @property
    def word_count(self) -> int:
        return len(self.text.split())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chart_id": self.chart_id,
            "level": self.level.value,
            "text": self.text,
            "provenance": self.provenance.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Insight":
        return cls(
            chart_id=data["chart_id"],
            level=InsightLevel(data["level"]),
            text=data["text"],
            provenance=Provenance(data["provenance"]),
        )


@dataclass(frozen=True)
class TextQuery:
    id: str
    text: str
    kind: QueryKind
    target_chart_id: str
    group_id: str
    discriminative: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "kind": self.kind.value,
            "target_chart_id": self.target_chart_id,
            "group_id": self.group_id,
            "discriminative": self.discriminative,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TextQuery":
        return cls(
            id=data["id"],
            text=data["text"],
            kind=QueryKind(data["kind"]),
            target_chart_id=data["target_chart_id"],
            group_id=data["group_id"],
            discriminative=bool(data.get("discriminative", True)),
        )


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """L2-normalized embedding shared by queries and charts."""

    values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @classmethod
    def from_array(cls, values, sentinel_if_zero: bool = True) -> "EmbeddingVector":
        """
        Normalize a raw vector.

        A zero (or empty-input) vector becomes the uniform sentinel 1/sqrt(d)
        so degenerate inputs still rank deterministically.
        """
        arr = np.asarray(values, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise ValueError("embedding must have at least one dimension")
        if not np.all(np.isfinite(arr)):
            raise ValueError("embedding contains non-finite values")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            if not sentinel_if_zero:
                raise ValueError("cannot normalize a zero vector")
            return cls(sentinel_vector(arr.size))
        return cls(arr / norm)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingVector):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.values.tobytes())


def sentinel_vector(dim: int) -> np.ndarray:
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=np.float64)


@dataclass(frozen=True)
class BenchmarkGroup:
    group_id: str
    target_id: str
    distractor_ids: Tuple[str, ...]
    anchor_similarities: Tuple[float, ...]
    precise_query: Optional[TextQuery] = None
    fuzzy_query: Optional[TextQuery] = None
    status: GroupStatus = GroupStatus.CANDIDATE

    @property
    def member_ids(self) -> Tuple[str, ...]:
        return (self.target_id,) + self.distractor_ids

    def to_dict(self) -> Dict[str, Any]:
        return {
            "group_id": self.group_id,
            "target_id": self.target_id,
            "distractor_ids": list(self.distractor_ids),
            "anchor_similarities": list(self.anchor_similarities),
            "precise_query": self.precise_query.to_dict() if self.precise_query else None,
            "fuzzy_query": self.fuzzy_query.to_dict() if self.fuzzy_query else None,
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BenchmarkGroup":
        precise = data.get("precise_query")
        fuzzy = data.get("fuzzy_query")
        return cls(
            group_id=data["group_id"],
            target_id=data["target_id"],
            distractor_ids=tuple(data["distractor_ids"]),
            anchor_similarities=tuple(float(s) for s in data["anchor_similarities"]),
            precise_query=TextQuery.from_dict(precise) if precise else None,
            fuzzy_query=TextQuery.from_dict(fuzzy) if fuzzy else None,
            status=GroupStatus(data["status"]),
        )


@dataclass(frozen=True)
class VoteRecord:
    query_id: str
    votes: Tuple[bool, ...]
    min_agree: int = 5

    @property
    def n_raters(self) -> int:
        return len(self.votes)

    def to_dict(self) -> Dict[str, Any]:
        return {"query_id": self.query_id, "votes": list(self.votes), "min_agree": self.min_agree}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VoteRecord":
        return cls(
            query_id=data["query_id"],
            votes=tuple(bool(v) for v in data["votes"]),
            min_agree=int(data.get("min_agree", 5)),
        )


@dataclass(frozen=True)
class RankedList:
    query_id: str
    entries: Tuple[Tuple[str, float], ...]
    k: int

    @property
    def chart_ids(self) -> List[str]:
        return [chart for chart, _ in self.entries]


@dataclass
class EvalReport:
    """Ranking metrics for one query set; all metrics are fractions in [0, 1]."""

    per_query_rank: Dict[str, Optional[int]] = field(default_factory=dict)
    r_at: Dict[int, float] = field(default_factory=dict)
    mrr_at_10: float = 0.0
    ndcg_at_10: float = 0.0
    overall: float = 0.0
    config_tag: str = ""

    @property
    def n_queries(self) -> int:
        return len(self.per_query_rank)


@dataclass(frozen=True)
class Violation:
    record_id: str
    message: str

    def __str__(self) -> str:
        return f"{self.record_id}: {self.message}"
