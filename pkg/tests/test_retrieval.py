import time

import numpy as np
import pytest

from chartsem.core.types import EmbeddingVector
from chartsem.encoder.model import normalize_rows
from chartsem.errors import DimensionMismatchError, DuplicateIdError
from chartsem.retrieval.index import VectorIndex, batch_search, build_index, build_index_from_matrix, search


def _random_index(rng, n, dim, prefix="c"):
    ids = [f"{prefix}-{i:04d}" for i in rng.permutation(n)]
    return build_index_from_matrix(ids, normalize_rows(rng.normal(size=(n, dim))))


def _brute_force(index, vec, k):
    scores = index.matrix @ vec.values
    order = sorted(range(len(index)), key=lambda i: (-scores[i], index.ids[i]))
    return [index.ids[i] for i in order[:k]]


@pytest.mark.parametrize("seed", range(100))
def test_search_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    index = _random_index(rng, 50 * (seed % 20) + 60, 16)
    vec = EmbeddingVector.from_array(rng.normal(size=16))
    for k in (1, 5, 10, 50):
        ranked = search(index, vec, k, "q")
        assert ranked.chart_ids == _brute_force(index, vec, k)
        scores = [score for _, score in ranked.entries]
        assert scores == sorted(scores, reverse=True)


@pytest.mark.parametrize("seed", range(10))
def test_coarse_vectors_with_many_ties_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    ids = [f"c-{i:04d}" for i in rng.permutation(300)]
    index = build_index_from_matrix(ids, normalize_rows(rng.integers(-2, 3, size=(300, 4)).astype(float)))
    vec = EmbeddingVector.from_array(rng.integers(-2, 3, size=4).astype(float))
    for k in (1, 10, 40):
        assert search(index, vec, k).chart_ids == _brute_force(index, vec, k)


def test_ties_are_broken_by_chart_id():
    same = EmbeddingVector.from_array([1.0, 0.0])
    other = EmbeddingVector.from_array([0.0, 1.0])
    index = build_index([("c-b", same), ("c-c", same), ("c-a", same), ("c-z", other)])
    assert search(index, same, 2).chart_ids == ["c-a", "c-b"]
    assert search(index, same, 4).chart_ids == ["c-a", "c-b", "c-c", "c-z"]


def test_k_larger_than_index_returns_everything():
    rng = np.random.default_rng(1)
    index = _random_index(rng, 7, 4)
    ranked = search(index, EmbeddingVector.from_array(rng.normal(size=4)), 10)
    assert len(ranked.entries) == 7
    assert ranked.k == 10


def test_k_must_be_positive():
    index = build_index([("c-a", EmbeddingVector.from_array([1.0, 0.0]))])
    with pytest.raises(ValueError):
        search(index, EmbeddingVector.from_array([1.0, 0.0]), 0)


def test_query_dim_must_match_index():
    index = build_index([("c-a", EmbeddingVector.from_array([1.0, 0.0]))])
    with pytest.raises(DimensionMismatchError):
        search(index, EmbeddingVector.from_array([1.0, 0.0, 0.0]), 1)


def test_mixed_dims_are_rejected():
    with pytest.raises(DimensionMismatchError):
        build_index([("c-a", EmbeddingVector.from_array([1.0, 0.0])),
                     ("c-b", EmbeddingVector.from_array([1.0, 0.0, 0.0]))])


def test_duplicate_chart_ids_are_rejected():
    vec = EmbeddingVector.from_array([1.0, 0.0])
    with pytest.raises(DuplicateIdError):
        build_index([("c-a", vec), ("c-a", vec)])


def test_empty_index_returns_empty_lists():
    index = build_index([])
    vec = EmbeddingVector.from_array([1.0, 0.0])
    assert search(index, vec, 5, "q").entries == ()
    assert [r.entries for r in batch_search(index, [vec, vec], 5)] == [(), ()]


def test_batch_search_equals_single_searches():
    rng = np.random.default_rng(4)
    index = _random_index(rng, 300, 32)
    queries = [EmbeddingVector.from_array(rng.normal(size=32)) for _ in range(25)]
    ids = [f"q-{i}" for i in range(25)]
    batched = batch_search(index, queries, 10, ids)
    assert batched == [search(index, vec, 10, qid) for vec, qid in zip(queries, ids)]


def test_index_rows_follow_id_order():
    rng = np.random.default_rng(5)
    index = _random_index(rng, 50, 8)
    assert index.ids == sorted(index.ids)
    assert not index.matrix.flags.writeable


def test_save_and_load_keep_rankings(tmp_path):
    rng = np.random.default_rng(6)
    index = _random_index(rng, 40, 8)
    path = str(tmp_path / "embeddings.bin")
    index.save(path)
    loaded = VectorIndex.load(path, index.ids)
    assert loaded.ids == index.ids
    vec = EmbeddingVector.from_array(rng.normal(size=8))
    assert search(loaded, vec, 5).chart_ids == search(index, vec, 5).chart_ids


@pytest.mark.slow
def test_benchmark_sized_search_is_fast():
    rng = np.random.default_rng(7)
    index = _random_index(rng, 22000, 128)
    queries = [EmbeddingVector.from_array(rng.normal(size=128)) for _ in range(326)]
    start = time.perf_counter()
    results = batch_search(index, queries, 10)
    assert time.perf_counter() - start < 2.0
    assert all(len(r.entries) == 10 for r in results)
