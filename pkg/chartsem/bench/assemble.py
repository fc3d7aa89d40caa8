"""
Benchmark assembly for chartsem.

Joins groups, their generated queries and the vote records into the final
queries.jsonl and groups.jsonl contents.
"""

import logging
from dataclasses import replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.types import BenchmarkGroup, GroupStatus, TextQuery, VoteRecord
from ..core.validation import validate_query
from ..errors import DuplicateIdError, ValidationError
from .consensus import validate_consensus

logger = logging.getLogger(__name__)


def _index_votes(votes: Iterable[VoteRecord]) -> Dict[str, VoteRecord]:
    by_query: Dict[str, VoteRecord] = {}
    for record in votes:
        if record.query_id in by_query:
            raise DuplicateIdError("vote record", record.query_id)
        by_query[record.query_id] = record
    return by_query


def assemble_benchmark(groups: Sequence[BenchmarkGroup], votes: Iterable[VoteRecord],
                       chart_ids: Optional[Iterable[str]] = None,
                       ) -> Tuple[List[TextQuery], List[BenchmarkGroup]]:
    """
    Keep the queries that won consensus.

    Args:
        groups: Groups with precise and fuzzy queries attached.
        votes: One vote record per query.
        chart_ids: Corpus chart ids; when given, every group member must be one.

    Returns:
        Tuple of (accepted queries in group order, every group with its
        status set and rejected queries removed).

    Raises:
        ValidationError: On dangling references (a query without votes, votes
            for an unknown query, a group without queries or an unknown chart),
            and on queries with empty text or ids that disagree with their group.
    """
    by_query = _index_votes(votes)
    known_charts = set(chart_ids) if chart_ids is not None else None

    missing_queries = [g.group_id for g in groups if g.precise_query is None or g.fuzzy_query is None]
    if missing_queries:
        raise ValidationError("groups have no generated queries", missing_queries)
    if known_charts is not None:
        unknown = sorted({cid for g in groups for cid in g.member_ids if cid not in known_charts})
        if unknown:
            raise ValidationError("groups reference unknown charts", unknown)
    invalid = sorted(q.id for g in groups for q in (g.precise_query, g.fuzzy_query) if validate_query(q, g))
    if invalid:
        raise ValidationError("queries do not match their group", invalid)

    query_ids = {q.id for g in groups for q in (g.precise_query, g.fuzzy_query)}
    unvoted = sorted(qid for qid in query_ids if qid not in by_query)
    if unvoted:
        raise ValidationError("queries have no vote record", unvoted)
    orphans = sorted(qid for qid in by_query if qid not in query_ids)
    if orphans:
        raise ValidationError("vote records reference unknown queries", orphans)

    accepted: List[TextQuery] = []
    assembled: List[BenchmarkGroup] = []
    for group in groups:
        kept = {}
        for field_name in ('precise_query', 'fuzzy_query'):
            query = getattr(group, field_name)
            if validate_consensus(by_query[query.id]) == GroupStatus.ACCEPTED:
                kept[field_name] = query
                accepted.append(query)
            else:
                kept[field_name] = None
        status = GroupStatus.ACCEPTED if any(kept.values()) else GroupStatus.REJECTED
        assembled.append(replace(group, status=status, **kept))

    n_rejected = sum(1 for g in assembled if g.status == GroupStatus.REJECTED)
    logger.info(f"Benchmark: {len(accepted)} accepted queries from {len(groups)} groups "
                f"({n_rejected} groups rejected)")
    return accepted, assembled
