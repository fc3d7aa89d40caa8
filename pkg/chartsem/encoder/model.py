"""
Dual encoder model for chartsem.

Two linear towers map sparse text and chart features into a shared
d-dimensional space; embeddings are the L2-normalized projections.

Checkpoint layout (little endian):
    magic "CSDE" | u32 F_t | u32 F_c | u32 d | f32 tau
    W_text (F_t x d, row-major f32) | W_chart (F_c x d, row-major f32)
"""

import logging
import math
import struct
from typing import List, Optional, Sequence

import numpy as np
from scipy import sparse

from ..core.types import ChartSpec, EmbeddingVector, sentinel_vector
from ..errors import CorpusFormatError, DimensionMismatchError, MissingArtifactError
from .features import CHART_FEATURES, TEXT_BUCKETS, extract_chart_features, text_features
from .preprocess import DIRECT_RESIZE, PreprocessMode

logger = logging.getLogger(__name__)

MAGIC = b"CSDE"
HEADER = struct.Struct("<4sIIIf")

DEFAULT_DIM = 128
DEFAULT_TAU = 0.07


class DualEncoderModel:
    """Text tower W_text (F_t x d) and chart tower W_chart (F_c x d)."""

    def __init__(self, w_text: np.ndarray, w_chart: np.ndarray, tau: float = DEFAULT_TAU,
                 init_seed: int = 0):
        if w_text.shape[1] != w_chart.shape[1]:
            raise DimensionMismatchError(
                f"tower dims differ: {w_text.shape[1]} vs {w_chart.shape[1]}"
            )
        if not tau > 0:
            raise ValueError(f"temperature must be positive, got {tau}")
        self.w_text = np.ascontiguousarray(w_text, dtype=np.float64)
        self.w_chart = np.ascontiguousarray(w_chart, dtype=np.float64)
        self.tau = float(tau)
        self.init_seed = init_seed

    @classmethod
    def random(cls, seed: int, dim: int = DEFAULT_DIM, tau: float = DEFAULT_TAU,
               n_text: int = TEXT_BUCKETS, n_chart: int = CHART_FEATURES) -> "DualEncoderModel":
        """Gaussian init with variance 1/d so projections of unit inputs have norm near 1."""
        rng = np.random.default_rng(seed)
        scale = 1.0 / math.sqrt(dim)
        w_text = rng.normal(0.0, scale, size=(n_text, dim))
        w_chart = rng.normal(0.0, scale, size=(n_chart, dim))
        return cls(w_text, w_chart, tau, init_seed=seed)

    @property
    def dim(self) -> int:
        return self.w_text.shape[1]

    def copy(self) -> "DualEncoderModel":
        return DualEncoderModel(self.w_text.copy(), self.w_chart.copy(), self.tau, self.init_seed)

    def project_text(self, features: sparse.spmatrix) -> np.ndarray:
        return np.asarray(features @ self.w_text)

    def project_chart(self, features: sparse.spmatrix) -> np.ndarray:
        return np.asarray(features @ self.w_chart)

    def embed_text_matrix(self, features: sparse.spmatrix) -> np.ndarray:
        return normalize_rows(self.project_text(features))

    def embed_chart_matrix(self, features: sparse.spmatrix) -> np.ndarray:
        return normalize_rows(self.project_chart(features))

    def save(self, path: str):
        try:
            with open(path, 'wb') as f:
                f.write(HEADER.pack(MAGIC, self.w_text.shape[0], self.w_chart.shape[0], self.dim, self.tau))
                f.write(self.w_text.astype('<f4').tobytes())
                f.write(self.w_chart.astype('<f4').tobytes())
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e

    @classmethod
    def load(cls, path: str) -> "DualEncoderModel":
        try:
            with open(path, 'rb') as f:
                raw = f.read()
        except FileNotFoundError:
            raise MissingArtifactError(path, "run the train stage first")
        if len(raw) < HEADER.size:
            raise CorpusFormatError(path, 1, "truncated checkpoint header")
        magic, n_text, n_chart, dim, tau = HEADER.unpack_from(raw, 0)
        if magic != MAGIC:
            raise CorpusFormatError(path, 1, f"bad magic {magic!r}")
        expected = HEADER.size + 4 * dim * (n_text + n_chart)
        if len(raw) != expected:
            raise CorpusFormatError(path, 1, f"expected {expected} bytes, found {len(raw)}")
        weights = np.frombuffer(raw, dtype='<f4', offset=HEADER.size).astype(np.float64)
        split = n_text * dim
        return cls(weights[:split].reshape(n_text, dim), weights[split:].reshape(n_chart, dim), float(tau))


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """L2-normalize rows; zero rows become the uniform 1/sqrt(d) sentinel."""
    matrix = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    out = np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)
    zero = norms[:, 0] == 0
    if np.any(zero):
        out[zero] = sentinel_vector(matrix.shape[1])
    return out


def to_vectors(matrix: np.ndarray) -> List[EmbeddingVector]:
    return [EmbeddingVector(row.copy()) for row in matrix]


def embed_text(model: DualEncoderModel, text: str) -> EmbeddingVector:
    """Embed one text; empty text yields the sentinel vector."""
    return EmbeddingVector(model.embed_text_matrix(text_features([text]))[0])


def embed_texts(model: DualEncoderModel, texts: Sequence[str]) -> List[EmbeddingVector]:
    if not texts:
        return []
    return to_vectors(model.embed_text_matrix(text_features(texts)))


def embed_chart(model: DualEncoderModel, spec: ChartSpec,
                mode: Optional[PreprocessMode] = None) -> EmbeddingVector:
    features = extract_chart_features(spec, mode or DIRECT_RESIZE)
    return EmbeddingVector(model.embed_chart_matrix(features.to_row())[0])


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """
    Cosine similarity of two embeddings, clamped to [-1, 1].

    Raises:
        DimensionMismatchError: If the dimensions differ.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot compare dims {a.dim} and {b.dim}")
    na, nb = np.linalg.norm(a.values), np.linalg.norm(b.values)
    if na == 0 or nb == 0:
        return 0.0
    return float(max(-1.0, min(1.0, np.dot(a.values, b.values) / (na * nb))))
