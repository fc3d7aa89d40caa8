"""
Target-and-distractor grouping for chartsem.

Every chart, visited in id order, is a candidate anchor. Its group_size - 1
nearest other charts become the distractors when all of them clear the
similarity threshold.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Set, Tuple

import numpy as np

from ..core.ids import group_id
from ..core.types import BenchmarkGroup, EmbeddingVector
from ..errors import ConfigError, DimensionMismatchError, DuplicateIdError
from ..retrieval.index import top_k_indices

logger = logging.getLogger(__name__)

ANCHOR_CHUNK = 512


@dataclass(frozen=True)
class GroupingConfig:
    threshold: float = 0.90
    group_size: int = 5
    distractor_reuse: bool = True

    def validate(self):
        if not 0 < self.threshold <= 1:
            raise ConfigError(f"grouping threshold must be in (0, 1], got {self.threshold}")
        if self.group_size < 2:
            raise ConfigError(f"group_size must be >= 2, got {self.group_size}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GroupingConfig":
        config = cls(
            threshold=float(data.get("threshold", 0.90)),
            group_size=int(data.get("group_size", 5)),
            distractor_reuse=bool(data.get("distractor_reuse", True)),
        )
        config.validate()
        return config


def _prepare(vectors: Sequence[Tuple[str, EmbeddingVector]]) -> Tuple[List[str], np.ndarray]:
    pairs = sorted(vectors, key=lambda p: p[0])
    ids = [cid for cid, _ in pairs]
    for a, b in zip(ids, ids[1:]):
        if a == b:
            raise DuplicateIdError("chart", a)
    dims = {vec.dim for _, vec in pairs}
    if len(dims) > 1:
        raise DimensionMismatchError(f"grouping vectors have mixed dims {sorted(dims)}")
    matrix = np.ascontiguousarray(np.vstack([vec.values for _, vec in pairs]))
    return ids, matrix


def _neighbours(matrix: np.ndarray, rows: range, k: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(neighbour rows, similarities) of each anchor row, excluding the anchor itself."""
    block = matrix[rows.start:rows.stop] @ matrix.T
    result = []
    for offset, scores in enumerate(block):
        anchor = rows.start + offset
        scores[anchor] = -np.inf
        picked = top_k_indices(scores, k)
        result.append((picked, scores[picked]))
    return result


def group_charts(vectors: Sequence[Tuple[str, EmbeddingVector]], config: GroupingConfig,
                 jobs: int = 1) -> List[BenchmarkGroup]:
    """
    Build candidate benchmark groups from visual embeddings.

    Args:
        vectors: (chart_id, unit vector) pairs.
        config: Threshold, group size and overlap policy.
        jobs: Worker threads for the nearest-neighbour scans.

    Returns:
        Groups in anchor id order; possibly empty.
    """
    config.validate()
    if len(vectors) < config.group_size:
        logger.warning(f"Only {len(vectors)} charts, fewer than group size {config.group_size}; no groups")
        return []
    ids, matrix = _prepare(vectors)
    k = config.group_size - 1
    chunks = [range(s, min(s + ANCHOR_CHUNK, len(ids))) for s in range(0, len(ids), ANCHOR_CHUNK)]

    if config.distractor_reuse and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scanned = list(pool.map(lambda rows: _neighbours(matrix, rows, k), chunks))
    else:
        scanned = None

    groups: List[BenchmarkGroup] = []
    used: Set[int] = set()
    for chunk_no, rows in enumerate(chunks):
        if scanned is not None:
            neighbours = scanned[chunk_no]
        elif config.distractor_reuse:
            neighbours = _neighbours(matrix, rows, k)
        else:
            neighbours = None

        for offset, anchor in enumerate(rows):
            if neighbours is not None:
                picked, sims = neighbours[offset]
            else:
                if anchor in used:
                    continue
                scores = matrix @ matrix[anchor]
                scores[anchor] = -np.inf
                if used:
                    scores[list(used)] = -np.inf
                picked = top_k_indices(scores, k)
                sims = scores[picked]
            if picked.size < k or not np.all(sims >= config.threshold):
                continue
            groups.append(BenchmarkGroup(
                group_id=group_id(ids[anchor]),
                target_id=ids[anchor],
                distractor_ids=tuple(ids[i] for i in picked),
                anchor_similarities=tuple(float(s) for s in sims),
            ))
            if not config.distractor_reuse:
                used.add(anchor)
                used.update(int(i) for i in picked)

    logger.info(f"Formed {len(groups)} groups from {len(ids)} charts (threshold {config.threshold})")
    return groups
