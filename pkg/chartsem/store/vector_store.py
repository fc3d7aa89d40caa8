"""
Binary embedding file for chartsem.

Layout of embeddings.bin (little endian):
    magic "CSEM" | u32 dim | u64 count
    count x ( 16-byte blake2b id hash | dim x f32 )
"""

import logging
import struct
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..core.ids import id_hash16
from ..errors import CorpusFormatError, DimensionMismatchError, MissingArtifactError

logger = logging.getLogger(__name__)

MAGIC = b"CSEM"
HEADER = struct.Struct("<4sIQ")


def _record_dtype(dim: int) -> np.dtype:
    return np.dtype([("hash", "u1", (16,)), ("vec", "<f4", (dim,))])


def write_embeddings(path: str, ids: Sequence[str], vectors: np.ndarray):
    """
    Write embeddings in the CSEM binary format.

    Args:
        path: Output file.
        ids: Record ids, one per row of vectors.
        vectors: count x dim matrix.
    """
    vectors = np.asarray(vectors)
    if vectors.ndim != 2 or vectors.shape[0] != len(ids):
        raise DimensionMismatchError(
            f"expected {len(ids)} x dim vectors, got shape {vectors.shape}"
        )
    count, dim = vectors.shape
    records = np.zeros(count, dtype=_record_dtype(dim))
    for i, record_id in enumerate(ids):
        records["hash"][i] = np.frombuffer(id_hash16(record_id), dtype=np.uint8)
    records["vec"] = vectors.astype("<f4")
    try:
        with open(path, "wb") as f:
            f.write(HEADER.pack(MAGIC, dim, count))
            f.write(records.tobytes())
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {count} embeddings of dim {dim} to {path}")


def read_embeddings(path: str, known_ids: Iterable[str]) -> Tuple[List[str], np.ndarray]:
    """
    Read a CSEM file, resolving id hashes against known ids.

    Args:
        path: Input file.
        known_ids: Candidate ids (e.g. all chart ids of the corpus).

    Returns:
        Tuple of (ids, float32 matrix) in file order.
    """
    by_hash: Dict[bytes, str] = {id_hash16(i): i for i in known_ids}
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except FileNotFoundError:
        raise MissingArtifactError(path, "run the embed or index stage first")
    except OSError as e:
        raise OSError(f"cannot read {path}: {e}") from e

    if len(raw) < HEADER.size:
        raise CorpusFormatError(path, 1, "truncated header")
    magic, dim, count = HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise CorpusFormatError(path, 1, f"bad magic {magic!r}")
    dtype = _record_dtype(dim)
    expected = HEADER.size + count * dtype.itemsize
    if len(raw) != expected:
        raise CorpusFormatError(path, 1, f"expected {expected} bytes, found {len(raw)}")

    records = np.frombuffer(raw, dtype=dtype, count=count, offset=HEADER.size)
    ids = []
    for i in range(count):
        key = records["hash"][i].tobytes()
        if key not in by_hash:
            raise CorpusFormatError(path, i + 1, f"record {i} has an id hash unknown to the corpus")
        ids.append(by_hash[key])
    return ids, np.array(records["vec"], dtype=np.float32)
