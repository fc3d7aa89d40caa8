"""
Exact vector index for chartsem.

Chart embeddings are stored as one contiguous (n x d) float64 matrix whose
rows follow ascending chart id, so a stable sort on descending score breaks
ties by chart id.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.types import EmbeddingVector, RankedList
from ..encoder.model import normalize_rows
from ..errors import DimensionMismatchError, DuplicateIdError
from ..store.vector_store import read_embeddings, write_embeddings

logger = logging.getLogger(__name__)


class VectorIndex:
    """Immutable flat index; safe for concurrent readers."""

    def __init__(self, ids: Sequence[str], matrix: np.ndarray):
        self.ids: List[str] = list(ids)
        self.matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.ids)

    def vector(self, chart_id: str) -> EmbeddingVector:
        return EmbeddingVector(self.matrix[self.ids.index(chart_id)].copy())

    def save(self, path: str):
        write_embeddings(path, self.ids, self.matrix)

    @classmethod
    def load(cls, path: str, known_ids: Iterable[str]) -> "VectorIndex":
        """Load embeddings.bin, resolving id hashes and re-normalizing in float64."""
        ids, matrix = read_embeddings(path, known_ids)
        return build_index_from_matrix(ids, normalize_rows(matrix.astype(np.float64)))


def build_index_from_matrix(ids: Sequence[str], matrix: np.ndarray) -> VectorIndex:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != len(ids):
        raise DimensionMismatchError(f"expected {len(ids)} rows, got matrix of shape {matrix.shape}")
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    sorted_ids = [ids[i] for i in order]
    for a, b in zip(sorted_ids, sorted_ids[1:]):
        if a == b:
            raise DuplicateIdError("chart", a)
    if not np.all(np.isfinite(matrix)):
        raise ValueError("index vectors must be finite")
    return VectorIndex(sorted_ids, matrix[order] if order else matrix.reshape(0, matrix.shape[1]))


def build_index(pairs: Sequence[Tuple[str, EmbeddingVector]]) -> VectorIndex:
    """
    Build an index from (chart_id, vector) pairs.

    Raises:
        DuplicateIdError: If a chart id repeats.
        DimensionMismatchError: If vector dims differ.
    """
    if not pairs:
        return VectorIndex([], np.zeros((0, 0)))
    dims = {vec.dim for _, vec in pairs}
    if len(dims) != 1:
        raise DimensionMismatchError(f"index vectors have mixed dims {sorted(dims)}")
    ids = [cid for cid, _ in pairs]
    matrix = np.vstack([vec.values for _, vec in pairs])
    return build_index_from_matrix(ids, matrix)


def top_k_indices(scores: np.ndarray, k: int) -> np.ndarray:
    """
    Row indices of the k best scores, best first; equal scores keep row order.
    """
    n = scores.size
    if k < n:
        threshold = np.partition(scores, n - k)[n - k]
        candidates = np.flatnonzero(scores >= threshold)
    else:
        candidates = np.arange(n)
    # Row order equals id order, so the secondary key is the row index.
    return candidates[np.lexsort((candidates, -scores[candidates]))][:k]


def _top_k(ids: Sequence[str], scores: np.ndarray, k: int) -> List[Tuple[str, float]]:
    return [(ids[i], float(scores[i])) for i in top_k_indices(scores, k)]


def _check_query(index: VectorIndex, vec: EmbeddingVector, k: int):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(index) and vec.dim != index.dim:
        raise DimensionMismatchError(f"query dim {vec.dim} != index dim {index.dim}")


def search(index: VectorIndex, query_vec: EmbeddingVector, k: int, query_id: str = "") -> RankedList:
    """
    Exact top-k by cosine (dot product of unit vectors).

    Ties are broken by chart id ascending.
    """
    _check_query(index, query_vec, k)
    if not len(index):
        return RankedList(query_id, (), k)
    scores = index.matrix @ query_vec.values
    return RankedList(query_id, tuple(_top_k(index.ids, scores, k)), k)


def batch_search(index: VectorIndex, queries: Sequence[EmbeddingVector], k: int,
                 query_ids: Optional[Sequence[str]] = None) -> List[RankedList]:
    """
    Search many queries against one index.

    Each query is scored with the same matrix-vector product as search(), so
    results are element-wise identical to repeated single searches.
    """
    if query_ids is None:
        query_ids = [""] * len(queries)
    for vec in queries:
        _check_query(index, vec, k)
    if not queries:
        return []
    if not len(index):
        return [RankedList(qid, (), k) for qid in query_ids]
    return [RankedList(qid, tuple(_top_k(index.ids, index.matrix @ vec.values, k)), k)
            for vec, qid in zip(queries, query_ids)]
