"""
Remote embedding client for chartsem.

Sends texts or SVG payloads to an external encoder:
    POST {"inputs": [str | {"svg": str}, ...]}  ->  {"vectors": [[float, ...], ...]}
Vectors are re-normalized locally.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Union

import numpy as np

from ..core.types import EmbeddingVector
from ..errors import DimensionMismatchError, ServiceError
from ..utils.http_client import post_json, with_retries

logger = logging.getLogger(__name__)

EmbedInput = Union[str, dict]


@dataclass(frozen=True)
class RemoteEmbedConfig:
    url: str
    dim: Optional[int] = None
    timeout: float = 30.0
    attempts: int = 3
    backoff: float = 0.5
    batch_size: int = 32
    concurrency: int = 4


def _embed_batch(batch: Sequence[EmbedInput], config: RemoteEmbedConfig) -> List[List[float]]:
    data = with_retries(
        lambda: post_json(config.url, {'inputs': list(batch)}, config.timeout),
        config.attempts,
        f"embedding from {config.url}",
        config.backoff,
    )
    vectors: Any = data.get('vectors')
    if not isinstance(vectors, list) or len(vectors) != len(batch):
        raise ServiceError(f"{config.url} returned {len(vectors) if isinstance(vectors, list) else 'no'} "
                           f"vectors for {len(batch)} inputs")
    return vectors


def remote_embed(inputs: Sequence[EmbedInput], config: RemoteEmbedConfig) -> List[EmbeddingVector]:
    """
    Embed inputs through a remote encoder, preserving order.

    Raises:
        ServiceError: On network or payload failure.
        DimensionMismatchError: If vectors disagree in dimension (or with config.dim).
    """
    if not inputs:
        return []
    size = max(1, config.batch_size)
    batches = [inputs[i:i + size] for i in range(0, len(inputs), size)]
    with ThreadPoolExecutor(max_workers=max(1, config.concurrency)) as pool:
        results = list(pool.map(lambda b: _embed_batch(b, config), batches))

    raw = [vector for batch in results for vector in batch]
    dims = {len(v) if isinstance(v, list) else -1 for v in raw}
    if len(dims) != 1 or -1 in dims:
        raise DimensionMismatchError(f"remote encoder returned mixed dimensions {sorted(dims)}")
    dim = dims.pop()
    if config.dim is not None and dim != config.dim:
        raise DimensionMismatchError(f"remote encoder returned dim {dim}, expected {config.dim}")
    try:
        return [EmbeddingVector.from_array(np.asarray(v, dtype=np.float64)) for v in raw]
    except (TypeError, ValueError) as e:
        raise ServiceError(f"remote encoder returned invalid values: {e}") from e
