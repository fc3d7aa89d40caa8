import numpy as np
import pytest

from chartsem.core.types import ChartType, EmbeddingVector
from chartsem.encoder.feature_bank import GROUPING_DIM, FeatureBank, visual_grouping_embeddings
from chartsem.encoder.features import (
    CHART_FEATURES,
    GRID_FEATURES,
    TEXT_BUCKETS,
    extract_chart_features,
    text_features,
    tokenize,
)
from chartsem.encoder.model import DualEncoderModel, cosine, embed_chart, embed_text, embed_texts, normalize_rows
from chartsem.encoder.preprocess import CENTER_CROP, DIRECT_RESIZE, PreprocessMode, area_matrix, preprocess
from chartsem.encoder.remote import RemoteEmbedConfig, remote_embed
from chartsem.errors import CorpusFormatError, DimensionMismatchError, MissingArtifactError, ServiceError
from chartsem.synth.raster import rasterize
from helpers import make_chart


def _anchor_texts(grid):
    return sorted((a.role, a.text) for a in grid.text_anchors)


def test_crop_drops_y_axis_name_and_resize_keeps_everything(small_charts):
    for spec in small_charts:
        grid = rasterize(spec)
        resized = preprocess(grid, DIRECT_RESIZE)
        cropped = preprocess(grid, CENTER_CROP)
        assert _anchor_texts(resized) == _anchor_texts(grid)
        roles = {a.role for a in cropped.text_anchors}
        assert 'y_label' not in roles
        assert 'title' in roles


def test_square_canvas_crop_equals_resize():
    grid = rasterize(make_chart("sq", canvas=(500, 500)))
    assert _anchor_texts(preprocess(grid, CENTER_CROP)) == _anchor_texts(preprocess(grid, DIRECT_RESIZE))


def test_preprocessed_grid_shape():
    grid = rasterize(make_chart("c1"))
    out = preprocess(grid, PreprocessMode(side=64))
    assert out.occupancy.shape == (64, 64)
    assert out.w == out.h == 64
    assert out.occupancy.max() <= 1.0
    with pytest.raises(ValueError):
        PreprocessMode(side=16)


def test_area_matrix_rows_average():
    matrix = area_matrix(0.0, 10.0, 10, 5)
    np.testing.assert_allclose(matrix.sum(axis=1), np.ones(5))
    np.testing.assert_allclose(area_matrix(0.0, 4.0, 4, 4), np.eye(4))


def test_text_features():
    assert tokenize("Hello, World_wide!") == ["hello", "world", "wide"]
    features = text_features(["sales by region", "", "sales by region"])
    assert features.shape == (3, TEXT_BUCKETS)
    norms = np.sqrt(np.asarray(features.multiply(features).sum(axis=1)).ravel())
    np.testing.assert_allclose(norms, [1.0, 0.0, 1.0])
    assert (features[0] != features[2]).nnz == 0


def test_chart_features_layout():
    features = extract_chart_features(make_chart("c1"), DIRECT_RESIZE)
    assert features.grid.shape == (GRID_FEATURES,)
    assert features.to_row().shape == (1, CHART_FEATURES)
    assert "Sales by region" in features.ocr_text


def test_model_shapes_and_embeddings():
    model = DualEncoderModel.random(3, dim=16)
    assert model.dim == 16
    vec = embed_text(model, "revenue by region")
    assert vec.dim == 16
    assert np.linalg.norm(vec.values) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(embed_text(model, "").values, np.full(16, 0.25))
    chart_vec = embed_chart(model, make_chart("c1"))
    assert np.linalg.norm(chart_vec.values) == pytest.approx(1.0, abs=1e-9)
    assert embed_texts(model, []) == []


def test_model_checkpoint_round_trip(tmp_path):
    model = DualEncoderModel.random(1, dim=8, tau=0.05)
    path = str(tmp_path / "model.bin")
    model.save(path)
    loaded = DualEncoderModel.load(path)
    assert loaded.tau == pytest.approx(0.05)
    np.testing.assert_allclose(loaded.w_text, model.w_text, rtol=1e-6, atol=1e-7)
    np.testing.assert_allclose(loaded.w_chart, model.w_chart, rtol=1e-6, atol=1e-7)


def test_bad_checkpoints(tmp_path):
    with pytest.raises(MissingArtifactError):
        DualEncoderModel.load(str(tmp_path / "none.bin"))
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"XXXX" + bytes(16))
    with pytest.raises(CorpusFormatError):
        DualEncoderModel.load(str(bad))
    with pytest.raises(DimensionMismatchError):
        DualEncoderModel(np.zeros((4, 3)), np.zeros((5, 2)))


def test_cosine():
    a = EmbeddingVector.from_array([1.0, 0.0])
    b = EmbeddingVector.from_array([1.0, 1.0])
    assert cosine(a, a) == pytest.approx(1.0)
    assert cosine(a, b) == pytest.approx(np.sqrt(0.5))
    with pytest.raises(DimensionMismatchError):
        cosine(a, EmbeddingVector.from_array([1.0, 0.0, 0.0]))


def test_normalize_rows_sentinel():
    out = normalize_rows(np.array([[3.0, 4.0], [0.0, 0.0]]))
    np.testing.assert_allclose(out, [[0.6, 0.8], [np.sqrt(0.5), np.sqrt(0.5)]])


def test_feature_bank(small_charts):
    bank = FeatureBank(list(reversed(small_charts)))
    assert bank.chart_ids == sorted(c.id for c in small_charts)
    matrix = bank.chart_matrix(DIRECT_RESIZE)
    assert matrix.shape == (len(small_charts), CHART_FEATURES)
    assert bank.chart_matrix(DIRECT_RESIZE) is matrix
    assert list(bank.rows(bank.chart_ids[:2])) == [0, 1]
    assert len(bank.ocr_texts(CENTER_CROP)) == len(small_charts)


def test_visual_grouping_embeddings(small_charts):
    bank = FeatureBank(small_charts)
    first = visual_grouping_embeddings(bank, DIRECT_RESIZE, seed=4)
    assert first.shape == (len(small_charts), GROUPING_DIM)
    np.testing.assert_allclose(np.linalg.norm(first, axis=1), 1.0)
    np.testing.assert_array_equal(first, visual_grouping_embeddings(bank, DIRECT_RESIZE, seed=4))


def test_empty_feature_bank():
    bank = FeatureBank([])
    assert bank.chart_matrix(DIRECT_RESIZE).shape == (0, CHART_FEATURES)
    assert bank.grid_matrix(DIRECT_RESIZE).shape == (0, GRID_FEATURES)


def _length_vectors(body):
    return 200, {'vectors': [[float(len(str(item))), 1.0] for item in body['inputs']]}


def test_remote_embed_keeps_order(stub_server):
    url, server = stub_server(_length_vectors)
    inputs = ["a", "bbb", "cc", {"svg": "<svg/>"}, "ddddd"]
    vectors = remote_embed(inputs, RemoteEmbedConfig(url, dim=2, timeout=5.0, batch_size=2, concurrency=2))
    expected = [EmbeddingVector.from_array([len(str(i)), 1.0]) for i in inputs]
    assert vectors == expected
    assert len(server.requests) == 3


def test_remote_embed_wrong_count(stub_server):
    url, _ = stub_server(lambda body: (200, {'vectors': [[1.0, 0.0]]}))
    with pytest.raises(ServiceError):
        remote_embed(["a", "b"], RemoteEmbedConfig(url, timeout=5.0, attempts=1))


def test_remote_embed_dimension_checks(stub_server):
    url, _ = stub_server(_length_vectors)
    with pytest.raises(DimensionMismatchError):
        remote_embed(["a"], RemoteEmbedConfig(url, dim=3, timeout=5.0))
    mixed_url, _ = stub_server(lambda body: (200, {'vectors': [[1.0], [1.0, 2.0]]}))
    with pytest.raises(DimensionMismatchError):
        remote_embed(["a", "b"], RemoteEmbedConfig(mixed_url, timeout=5.0))
