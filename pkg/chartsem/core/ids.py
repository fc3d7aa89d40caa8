"""
Deterministic identifiers and seed derivation.

All stochastic stages draw their seed from one global seed through
splitmix64, so the same `--seed` reproduces every id and every byte.
"""

import hashlib
from typing import Union

MASK64 = (1 << 64) - 1

Label = Union[str, int]


def stable_hash64(label: Label) -> int:
    """64-bit blake2b hash of a label (Python's hash() is salted per process)."""
    digest = hashlib.blake2b(str(label).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def id_hash16(record_id: str) -> bytes:
    """16-byte hash used to key records in binary files."""
    return hashlib.blake2b(record_id.encode("utf-8"), digest_size=16).digest()


def splitmix64(x: int) -> int:
    """One splitmix64 step."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *labels: Label) -> int:
    """
    Derive a sub-seed for a pipeline stage.

    Args:
        seed: Global seed.
        *labels: Stage name and any further qualifiers (table index, chart id...).

    Returns:
        A 64-bit seed.
    """
    value = seed & MASK64
    for label in labels:
        value = splitmix64(value ^ stable_hash64(label))
    return value


def table_id(index: int, seed: int) -> str:
    """Id of the index-th generated table."""
    return f"tbl-{index:05d}-{derive_seed(seed, 'table-id', index) & 0xFFFFFF:06x}"


def chart_id(source_table_id: str, position: int) -> str:
    return f"{source_table_id}-c{position:02d}"


def group_id(anchor_id: str) -> str:
    return f"grp-{anchor_id}"


def query_id(group: str, kind: str) -> str:
    return f"{group}-{kind[0]}"
