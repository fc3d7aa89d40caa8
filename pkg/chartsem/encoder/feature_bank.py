"""
Feature cache for chartsem.

Rasterizes every chart once and keeps the sparse feature matrices per
preprocessing mode, so training, ablation and evaluation share them.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence

import numpy as np
from scipy import sparse

from ..core.types import ChartSpec, PreprocessKind
from ..synth.raster import rasterize
from .features import CHART_FEATURES, GRID_FEATURES, ChartFeatures, features_from_grid, text_features
from .model import normalize_rows
from .preprocess import PreprocessMode

logger = logging.getLogger(__name__)

GROUPING_DIM = 768


class FeatureBank:
    """Chart and text feature matrices for one corpus."""

    def __init__(self, charts: Sequence[ChartSpec], jobs: int = 1):
        """
        Initialize the bank.

        Args:
            charts: Corpus charts; row order of every chart matrix follows chart id.
            jobs: Worker threads used for rasterization.
        """
        self.charts = sorted(charts, key=lambda c: c.id)
        self.chart_ids = [c.id for c in self.charts]
        self.row_of: Dict[str, int] = {cid: i for i, cid in enumerate(self.chart_ids)}
        self.jobs = max(1, jobs)
        self._features: Dict[PreprocessKind, List[ChartFeatures]] = {}
        self._matrices: Dict[PreprocessKind, sparse.csr_matrix] = {}

    def __len__(self) -> int:
        return len(self.charts)

    def _build(self, mode: PreprocessMode) -> List[ChartFeatures]:
        def one(spec: ChartSpec) -> ChartFeatures:
            return features_from_grid(rasterize(spec), mode)

        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                features = list(pool.map(one, self.charts))
        else:
            features = []
            for i, spec in enumerate(self.charts, start=1):
                features.append(one(spec))
                if i % 500 == 0:
                    logger.info(f"Extracted {mode.tag} features for {i}/{len(self.charts)} charts")
        logger.info(f"Extracted {mode.tag} features for {len(features)} charts")
        return features

    def chart_features(self, mode: PreprocessMode) -> List[ChartFeatures]:
        if mode.kind not in self._features:
            self._features[mode.kind] = self._build(mode)
        return self._features[mode.kind]

    def chart_matrix(self, mode: PreprocessMode) -> sparse.csr_matrix:
        """n_charts x F_c matrix in chart id order."""
        if mode.kind not in self._matrices:
            rows = [f.to_row() for f in self.chart_features(mode)]
            if rows:
                self._matrices[mode.kind] = sparse.vstack(rows, format='csr')
            else:
                self._matrices[mode.kind] = sparse.csr_matrix((0, CHART_FEATURES))
        return self._matrices[mode.kind]

    def grid_matrix(self, mode: PreprocessMode) -> np.ndarray:
        """n_charts x 1024 dense pooled occupancy grids."""
        features = self.chart_features(mode)
        if not features:
            return np.zeros((0, GRID_FEATURES))
        return np.vstack([f.grid for f in features])

    def ocr_texts(self, mode: PreprocessMode) -> List[str]:
        return [f.ocr_text for f in self.chart_features(mode)]

    def rows(self, chart_ids: Sequence[str]) -> np.ndarray:
        return np.array([self.row_of[cid] for cid in chart_ids], dtype=np.int64)

    @staticmethod
    def text_matrix(texts: Sequence[str]) -> sparse.csr_matrix:
        return text_features(texts)


def visual_grouping_embeddings(bank: FeatureBank, mode: PreprocessMode, dim: int = GROUPING_DIM,
                               seed: int = 0) -> np.ndarray:
    """
    Stand-in for a pre-trained visual encoder used to group similar charts.

    The pooled occupancy grids are projected by a seeded Gaussian matrix to
    `dim` dimensions and L2-normalized. Random projection roughly preserves
    the cosine geometry of the grids.

    Returns:
        n_charts x dim matrix in chart id order.
    """
    grids = bank.grid_matrix(mode)
    rng = np.random.default_rng(seed)
    projection = rng.normal(0.0, 1.0 / np.sqrt(dim), size=(grids.shape[1], dim))
    return normalize_rows(grids @ projection)
