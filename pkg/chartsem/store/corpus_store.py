"""
Corpus storage for chartsem.

Handles the JSON Lines files of a corpus directory: tables, charts, insights,
queries, groups and votes, plus one SVG file per chart.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from ..core.types import (
    ALL_LEVELS,
    BenchmarkGroup,
    ChartSpec,
    Insight,
    Table,
    TextQuery,
    VoteRecord,
)
from ..core.validation import validate_corpus
from ..errors import CorpusFormatError, DuplicateIdError, MissingArtifactError, ValidationError

logger = logging.getLogger(__name__)

T = TypeVar("T")

TABLES_FILE = "tables.jsonl"
CHARTS_FILE = "charts.jsonl"
INSIGHTS_FILE = "insights.jsonl"
QUERIES_FILE = "queries.jsonl"
GROUPS_FILE = "groups.jsonl"
VOTES_FILE = "votes.jsonl"
SVG_DIR = "svg"

_LEVEL_ORDER = {level: i for i, level in enumerate(ALL_LEVELS)}


def default_corpus_dir() -> str:
    data_home = os.environ.get('XDG_DATA_HOME', os.path.expanduser('~/.local/share'))
    return os.path.join(data_home, 'chartsem', 'corpus')


def insight_key(insight: Insight) -> Tuple[str, int]:
    return insight.chart_id, _LEVEL_ORDER[insight.level]


class CorpusStore:
    """Reads and writes the files of one corpus directory."""

    def __init__(self, root: Optional[str] = None):
        """
        Initialize the store.

        Args:
            root: Corpus directory. If None, uses XDG_DATA_HOME/chartsem/corpus.
        """
        self.root = Path(root if root is not None else default_corpus_dir())

    def path(self, name: str) -> Path:
        return self.root / name

    def exists(self, name: str) -> bool:
        return self.path(name).is_file()

    def require(self, name: str, hint: str = "") -> Path:
        """Return the path of a stage input, raising if it was never built."""
        path = self.path(name)
        if not path.is_file():
            raise MissingArtifactError(str(path), hint)
        return path

    # Generic JSON Lines helpers
    def write_jsonl(self, name: str, records: Iterable[Dict[str, Any]]):
        path = self.path(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                for record in records:
                    f.write(json.dumps(record, ensure_ascii=False))
                    f.write('\n')
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e

    def read_jsonl(self, name: str, parse: Callable[[Dict[str, Any]], T]) -> List[T]:
        path = self.require(name)
        records = []
        try:
            with open(path, 'r', encoding='utf-8') as f:
                for line_no, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        records.append(parse(json.loads(line)))
                    except (ValueError, KeyError, TypeError) as e:
                        raise CorpusFormatError(str(path), line_no, f"malformed record: {e}") from e
        except OSError as e:
            raise OSError(f"cannot read {path}: {e}") from e
        return records

    # Tables
    def save_tables(self, tables: Sequence[Table]):
        self.write_jsonl(TABLES_FILE, (t.to_dict() for t in sorted(tables, key=lambda t: t.id)))

    def load_tables(self) -> List[Table]:
        tables = self.read_jsonl(TABLES_FILE, Table.from_dict)
        _check_unique("table", [t.id for t in tables])
        return sorted(tables, key=lambda t: t.id)

    # Charts
    def save_charts(self, charts: Sequence[ChartSpec], write_svg: bool = True):
        ordered = sorted(charts, key=lambda c: c.id)
        self.write_jsonl(CHARTS_FILE, (c.to_dict() for c in ordered))
        if write_svg:
            from ..synth.render import render_svg

            for spec in ordered:
                self.write_text(spec.svg_path, render_svg(spec))

    def load_charts(self) -> List[ChartSpec]:
        charts = self.read_jsonl(CHARTS_FILE, ChartSpec.from_dict)
        _check_unique("chart", [c.id for c in charts])
        return sorted(charts, key=lambda c: c.id)

    # Insights
    def save_insights(self, insights: Sequence[Insight]):
        self.write_jsonl(INSIGHTS_FILE, (i.to_dict() for i in sorted(insights, key=insight_key)))

    def load_insights(self) -> List[Insight]:
        insights = self.read_jsonl(INSIGHTS_FILE, Insight.from_dict)
        _check_unique("insight", [f"{i.chart_id}/{i.level.value}" for i in insights])
        return sorted(insights, key=insight_key)

    # Benchmark files
    def save_queries(self, queries: Sequence[TextQuery]):
        self.write_jsonl(QUERIES_FILE, (q.to_dict() for q in sorted(queries, key=lambda q: q.id)))

    def load_queries(self) -> List[TextQuery]:
        queries = self.read_jsonl(QUERIES_FILE, TextQuery.from_dict)
        _check_unique("query", [q.id for q in queries])
        return sorted(queries, key=lambda q: q.id)

    def save_groups(self, groups: Sequence[BenchmarkGroup]):
        self.write_jsonl(GROUPS_FILE, (g.to_dict() for g in sorted(groups, key=lambda g: g.group_id)))

    def load_groups(self) -> List[BenchmarkGroup]:
        groups = self.read_jsonl(GROUPS_FILE, BenchmarkGroup.from_dict)
        _check_unique("group", [g.group_id for g in groups])
        return sorted(groups, key=lambda g: g.group_id)

    def save_votes(self, votes: Sequence[VoteRecord]):
        self.write_jsonl(VOTES_FILE, (v.to_dict() for v in sorted(votes, key=lambda v: v.query_id)))

    def load_votes(self) -> List[VoteRecord]:
        votes = self.read_jsonl(VOTES_FILE, VoteRecord.from_dict)
        _check_unique("vote", [v.query_id for v in votes])
        return sorted(votes, key=lambda v: v.query_id)

    # Plain files
    def write_text(self, name: str, text: str):
        path = self.path(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e

    def read_text(self, name: str) -> str:
        path = self.require(name)
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()


def _check_unique(kind: str, ids: List[str]):
    seen = set()
    for record_id in ids:
        if record_id in seen:
            raise DuplicateIdError(kind, record_id)
        seen.add(record_id)


def _raise_on_violations(charts, insights, tables):
    violations = validate_corpus(charts, insights, tables)
    if violations:
        for violation in violations[:20]:
            logger.error(f"Validation failed: {violation}")
        raise ValidationError(
            f"{len(violations)} invariant violation(s): {violations[0].message}",
            sorted({v.record_id for v in violations}),
        )


def save_corpus(charts: Sequence[ChartSpec], insights: Sequence[Insight], path: str,
                tables: Optional[Sequence[Table]] = None):
    """
    Validate and write a corpus directory.

    Args:
        charts: Chart specs; one SVG is rendered per chart under svg/.
        insights: Insights for the charts.
        path: Target directory (created if needed).
        tables: Optional source tables, written to tables.jsonl.
    """
    _raise_on_violations(charts, insights, tables)
    store = CorpusStore(path)
    if tables is not None:
        store.save_tables(tables)
    store.save_charts(charts)
    store.save_insights(insights)
    logger.info(f"Saved {len(charts)} charts and {len(insights)} insights to {path}")


def load_corpus(path: str) -> Tuple[List[ChartSpec], List[Insight]]:
    """
    Load and re-validate a corpus directory.

    Returns:
        Tuple of (charts, insights), both ordered by id.
    """
    store = CorpusStore(path)
    charts = store.load_charts()
    insights = store.load_insights() if store.exists(INSIGHTS_FILE) else []
    tables = store.load_tables() if store.exists(TABLES_FILE) else None
    _raise_on_violations(charts, insights, tables)
    return charts, insights
