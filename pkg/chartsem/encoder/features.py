"""
Feature extraction for chartsem.

Text features hash word 1-2-grams and per-token character 3-grams into a
fixed number of buckets (term-frequency weights, L2-normalized). Chart
features concatenate a 32x32 pooled occupancy grid with the text features of
the rendered strings that survive preprocessing.
"""

import hashlib
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence

import numpy as np
from scipy import sparse

from ..core.types import ChartSpec
from ..synth.raster import PixelGrid, rasterize
from .preprocess import PreprocessMode, keep_anchor, pool_window, viewport

TEXT_BUCKETS = 4096
GRID_SIDE = 32
GRID_FEATURES = GRID_SIDE * GRID_SIDE
CHART_FEATURES = GRID_FEATURES + TEXT_BUCKETS

_PUNCT = re.compile(r"[^\w\s]+")


def tokenize(text: str) -> List[str]:
    """Lowercase, strip punctuation and split on whitespace."""
    return _PUNCT.sub(' ', text.lower()).replace('_', ' ').split()


def ngrams(tokens: Sequence[str]) -> Iterable[str]:
    for token in tokens:
        yield f"w:{token}"
        padded = f"#{token}#"
        for i in range(len(padded) - 2):
            yield f"c:{padded[i:i + 3]}"
    for a, b in zip(tokens, tokens[1:]):
        yield f"b:{a} {b}"


@lru_cache(maxsize=1 << 18)
def bucket(feature: str, n_buckets: int = TEXT_BUCKETS) -> int:
    digest = hashlib.blake2b(feature.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'little') % n_buckets


def text_feature_dict(text: str, n_buckets: int = TEXT_BUCKETS) -> dict:
    """Normalized bucket -> weight map; empty for text without tokens."""
    counts = Counter(bucket(f, n_buckets) for f in ngrams(tokenize(text)))
    if not counts:
        return {}
    norm = float(np.sqrt(sum(c * c for c in counts.values())))
    return {b: c / norm for b, c in sorted(counts.items())}


def text_features(texts: Sequence[str], n_buckets: int = TEXT_BUCKETS) -> sparse.csr_matrix:
    """
    Hashed n-gram features of several texts.

    Returns:
        len(texts) x n_buckets CSR matrix with unit-norm rows (zero rows for
        empty texts).
    """
    indptr = [0]
    indices: List[int] = []
    data: List[float] = []
    for text in texts:
        features = text_feature_dict(text, n_buckets)
        indices.extend(features.keys())
        data.extend(features.values())
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(texts), n_buckets),
    )


@dataclass(frozen=True, eq=False)
class ChartFeatures:
    grid: np.ndarray
    ocr: sparse.csr_matrix
    ocr_text: str

    def to_row(self) -> sparse.csr_matrix:
        """1 x CHART_FEATURES row: grid part then ocr part."""
        return sparse.hstack([sparse.csr_matrix(self.grid.reshape(1, -1)), self.ocr], format='csr')


def ocr_text(grid: PixelGrid, mode: PreprocessMode) -> str:
    """Strings of the anchors visible after preprocessing, joined in paint order."""
    window = viewport(grid.w, grid.h, mode.kind)
    return ' '.join(a.text for a in grid.text_anchors if keep_anchor(a, window))


def features_from_grid(grid: PixelGrid, mode: PreprocessMode) -> ChartFeatures:
    window = viewport(grid.w, grid.h, mode.kind)
    pooled = pool_window(grid.occupancy, window, GRID_SIDE, GRID_SIDE).reshape(-1)
    text = ocr_text(grid, mode)
    return ChartFeatures(grid=pooled, ocr=text_features([text]), ocr_text=text)


def extract_chart_features(spec: ChartSpec, mode: PreprocessMode) -> ChartFeatures:
    """
    Features of a chart as seen by the image tower.

    Only the rendered geometry and the rendered strings are used. The grid is
    pooled straight from the preprocessing window, which equals pooling the
    S x S preprocessed image.
    """
    return features_from_grid(rasterize(spec), mode)
