"""
Consensus voting for chartsem benchmark queries.

A query is kept when at least min_agree of the raters picked its target
chart out of the group. Real votes come from votes.jsonl; simulate_votes is
a seeded rater model for runs without crowd input.
"""

import logging
from typing import Dict, List, Sequence

import numpy as np

from ..core.ids import derive_seed
from ..core.types import GroupStatus, TextQuery, VoteRecord
from ..errors import ValidationError

logger = logging.getLogger(__name__)

N_RATERS = 9
MIN_AGREE = 5
P_TRUE = 0.9
P_FALSE = 0.3


def validate_consensus(record: VoteRecord) -> GroupStatus:
    """
    Accept a query iff at least min_agree raters chose its target.

    Raises:
        ValidationError: If min_agree is outside [1, n_raters].
    """
    if not 1 <= record.min_agree <= record.n_raters:
        raise ValidationError(f"min_agree {record.min_agree} outside 1..{record.n_raters}",
                              [record.query_id])
    agreeing = sum(1 for vote in record.votes if vote)
    return GroupStatus.ACCEPTED if agreeing >= record.min_agree else GroupStatus.REJECTED


def simulate_votes(query: TextQuery, seed: int, n_raters: int = N_RATERS, p_true: float = P_TRUE,
                   p_false: float = P_FALSE, min_agree: int = MIN_AGREE) -> VoteRecord:
    """
    Simulated raters: each picks the target with probability p_true when the
    query is discriminative and p_false otherwise.
    """
    rng = np.random.default_rng(derive_seed(seed, 'votes', query.id))
    p = p_true if query.discriminative else p_false
    votes = tuple(bool(v) for v in rng.random(n_raters) < p)
    return VoteRecord(query.id, votes, min_agree)


def simulate_all(queries: Sequence[TextQuery], seed: int, n_raters: int = N_RATERS,
                 p_true: float = P_TRUE, p_false: float = P_FALSE,
                 min_agree: int = MIN_AGREE) -> List[VoteRecord]:
    records = [simulate_votes(q, seed, n_raters, p_true, p_false, min_agree) for q in queries]
    logger.info(f"Simulated {n_raters} votes for each of {len(records)} queries")
    return records


def tally(records: Sequence[VoteRecord]) -> Dict[GroupStatus, int]:
    counts = {GroupStatus.ACCEPTED: 0, GroupStatus.REJECTED: 0}
    for record in records:
        counts[validate_consensus(record)] += 1
    return counts
