"""
Symmetric InfoNCE loss with analytic gradients.
"""

from typing import Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from ..errors import DimensionMismatchError, InsufficientDataError


def _normalize(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(u, axis=1)
    t = np.divide(u, norms[:, None], out=np.zeros_like(u), where=norms[:, None] > 0)
    zero = norms == 0
    if np.any(zero):
        t[zero] = 1.0 / np.sqrt(u.shape[1])
    return t, norms


def _normalize_backward(grad_t: np.ndarray, t: np.ndarray, norms: np.ndarray) -> np.ndarray:
    # d(u/|u|) applied to g is (g - t (t.g)) / |u|; rows with |u| = 0 get no gradient.
    radial = np.sum(grad_t * t, axis=1, keepdims=True)
    out = np.divide(grad_t - t * radial, norms[:, None], out=np.zeros_like(grad_t),
                    where=norms[:, None] > 0)
    return out


def info_nce(text_vecs: np.ndarray, chart_vecs: np.ndarray,
             tau: float) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Symmetric InfoNCE over a batch whose row i on both sides is a positive pair.

    loss = 1/2 [ mean_i -log softmax_j(S_ij)[i] + mean_j -log softmax_i(S_ij)[j] ]
    with S = normalize(text) . normalize(chart)^T / tau.

    Args:
        text_vecs: B x d projected text vectors (before normalization).
        chart_vecs: B x d projected chart vectors (before normalization).
        tau: Temperature.

    Returns:
        Tuple of (loss, grad w.r.t. text_vecs, grad w.r.t. chart_vecs).
    """
    text_vecs = np.asarray(text_vecs, dtype=np.float64)
    chart_vecs = np.asarray(chart_vecs, dtype=np.float64)
    if text_vecs.shape != chart_vecs.shape:
        raise DimensionMismatchError(f"batch shapes differ: {text_vecs.shape} vs {chart_vecs.shape}")
    batch = text_vecs.shape[0]
    if batch < 2:
        raise InsufficientDataError(f"InfoNCE needs a batch of at least 2 pairs, got {batch}")

    t, t_norms = _normalize(text_vecs)
    c, c_norms = _normalize(chart_vecs)
    logits = (t @ c.T) / tau
    diag = np.diag(logits)

    loss_rows = np.mean(logsumexp(logits, axis=1) - diag)
    loss_cols = np.mean(logsumexp(logits, axis=0) - diag)
    loss = 0.5 * (loss_rows + loss_cols)

    eye = np.eye(batch)
    grad_logits = 0.5 * ((softmax(logits, axis=1) - eye) + (softmax(logits, axis=0) - eye)) / (batch * tau)
    grad_t = grad_logits @ c
    grad_c = grad_logits.T @ t

    return (float(loss),
            _normalize_backward(grad_t, t, t_norms),
            _normalize_backward(grad_c, c, c_norms))
