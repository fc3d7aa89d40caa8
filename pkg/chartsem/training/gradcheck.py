"""
Finite-difference verification of the training gradients.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import sparse

from ..encoder.model import DualEncoderModel
from .loss import info_nce

logger = logging.getLogger(__name__)

N_COORDINATES = 50
EPS = 1e-5


def batch_loss(model: DualEncoderModel, text_x: sparse.spmatrix, chart_x: sparse.spmatrix) -> float:
    return info_nce(model.project_text(text_x), model.project_chart(chart_x), model.tau)[0]


def weight_gradients(model: DualEncoderModel, text_x: sparse.spmatrix,
                     chart_x: sparse.spmatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of the batch loss w.r.t. W_text and W_chart."""
    _, grad_t, grad_c = info_nce(model.project_text(text_x), model.project_chart(chart_x), model.tau)
    return np.asarray(text_x.T @ grad_t), np.asarray(chart_x.T @ grad_c)


def _active_rows(x: sparse.spmatrix) -> np.ndarray:
    active = np.flatnonzero(np.asarray(abs(x).sum(axis=0)).ravel())
    return active if active.size else np.arange(x.shape[1])


def grad_check(model: DualEncoderModel, batch: Tuple[sparse.spmatrix, sparse.spmatrix],
               eps: float = EPS, n_coordinates: int = N_COORDINATES, seed: int = 0) -> float:
    """
    Compare analytic and central-difference gradients on random weights.

    Coordinates are drawn from weight rows of features active in the batch
    (other rows have zero gradient on both sides).

    Args:
        model: Model to check; left unchanged.
        batch: (text features, chart features), B rows each.
        eps: Finite-difference step.
        n_coordinates: Number of weight coordinates sampled.
        seed: Sampling seed.

    Returns:
        Max over the sampled coordinates of |a - n| / max(|a|, |n|, 1e-12).
    """
    text_x, chart_x = sparse.csr_matrix(batch[0]), sparse.csr_matrix(batch[1])
    grad_text, grad_chart = weight_gradients(model, text_x, chart_x)
    rng = np.random.default_rng(seed)
    text_rows, chart_rows = _active_rows(text_x), _active_rows(chart_x)

    perturbed = model.copy()
    error = 0.0
    for _ in range(n_coordinates):
        use_text = bool(rng.random() < 0.5)
        rows = text_rows if use_text else chart_rows
        weights = perturbed.w_text if use_text else perturbed.w_chart
        analytic_grad = grad_text if use_text else grad_chart
        i = int(rows[rng.integers(rows.size)])
        j = int(rng.integers(model.dim))

        original = weights[i, j]
        weights[i, j] = original + eps
        plus = batch_loss(perturbed, text_x, chart_x)
        weights[i, j] = original - eps
        minus = batch_loss(perturbed, text_x, chart_x)
        weights[i, j] = original

        numeric = (plus - minus) / (2 * eps)
        analytic = float(analytic_grad[i, j])
        error = max(error, abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-12))
    logger.debug(f"Gradient check with eps={eps}: max relative error {error:.3e}")
    return error
