import math

import numpy as np
import pytest
from scipy import sparse

from chartsem.core.types import ALL_LEVELS, InsightLevel
from chartsem.encoder.feature_bank import FeatureBank
from chartsem.encoder.model import DualEncoderModel
from chartsem.errors import ConfigError, DimensionMismatchError, InsufficientDataError
from chartsem.training.gradcheck import grad_check, weight_gradients
from chartsem.training.loss import info_nce
from chartsem.training.pairs import build_pairs
from chartsem.training.trainer import TrainConfig, Trainer, init_model, train
from helpers import make_chart, make_insight, make_insights


def _numeric_gradients(text, chart, tau, eps=1e-6):
    grads = []
    for which in (0, 1):
        base = (text, chart)[which]
        grad = np.zeros_like(base)
        for idx in np.ndindex(base.shape):
            original = base[idx]
            base[idx] = original + eps
            plus = info_nce(text, chart, tau)[0]
            base[idx] = original - eps
            minus = info_nce(text, chart, tau)[0]
            base[idx] = original
            grad[idx] = (plus - minus) / (2 * eps)
        grads.append(grad)
    return grads


def test_identical_embeddings_give_log_batch_size():
    vecs = np.ones((8, 16))
    loss, grad_t, grad_c = info_nce(vecs, vecs.copy(), 0.07)
    assert loss == pytest.approx(math.log(8), abs=1e-9)
    assert np.allclose(grad_t, 0.0)
    assert np.allclose(grad_c, 0.0)


def test_loss_is_lower_for_aligned_pairs():
    rng = np.random.default_rng(3)
    text = rng.normal(size=(6, 8))
    aligned = info_nce(text, text + 0.01 * rng.normal(size=text.shape), 0.1)[0]
    shuffled = info_nce(text, text[::-1].copy(), 0.1)[0]
    assert aligned < shuffled


@pytest.mark.parametrize("seed", range(20))
def test_analytic_gradients_match_central_differences(seed):
    rng = np.random.default_rng(seed)
    text = rng.normal(size=(8, 16))
    chart = rng.normal(size=(8, 16))
    _, grad_t, grad_c = info_nce(text, chart, 0.07)
    num_t, num_c = _numeric_gradients(text, chart, 0.07)
    for analytic, numeric in ((grad_t, num_t), (grad_c, num_c)):
        error = np.max(np.abs(analytic - numeric)) / np.max(np.abs(numeric))
        assert error <= 1e-4


def test_info_nce_rejects_bad_batches():
    with pytest.raises(InsufficientDataError):
        info_nce(np.ones((1, 4)), np.ones((1, 4)), 0.07)
    with pytest.raises(DimensionMismatchError):
        info_nce(np.ones((3, 4)), np.ones((3, 5)), 0.07)


def _sparse_batch(rng, rows, cols, density=0.05):
    x = sparse.random(rows, cols, density=density, random_state=rng, format='csr')
    x.data = np.abs(x.data) + 0.1
    return x


@pytest.mark.parametrize("seed", range(20))
def test_weight_gradients_pass_gradient_check(seed):
    rng = np.random.default_rng(seed)
    model = DualEncoderModel.random(seed, dim=16, n_text=64, n_chart=48)
    batch = (_sparse_batch(rng, 8, 64, 0.2), _sparse_batch(rng, 8, 48, 0.2))
    assert grad_check(model, batch, seed=seed) <= 1e-4


@pytest.mark.parametrize("seed", range(3))
def test_coarse_step_gives_larger_gradient_error(seed):
    rng = np.random.default_rng(seed)
    model = DualEncoderModel.random(seed, dim=16, n_text=64, n_chart=48)
    batch = (_sparse_batch(rng, 8, 64, 0.2), _sparse_batch(rng, 8, 48, 0.2))
    assert grad_check(model, batch, eps=1e-2, seed=seed) > grad_check(model, batch, eps=1e-5, seed=seed)


def test_gradient_check_on_zero_model_with_empty_text_is_finite():
    rng = np.random.default_rng(3)
    model = DualEncoderModel(np.zeros((64, 16)), np.zeros((48, 16)))
    empty_text = sparse.csr_matrix((8, 64))
    error = grad_check(model, (empty_text, _sparse_batch(rng, 8, 48, 0.2)))
    assert math.isfinite(error)
    assert error >= 0.0


def test_gradient_check_leaves_model_unchanged():
    rng = np.random.default_rng(1)
    model = DualEncoderModel.random(1, dim=8, n_text=32, n_chart=32)
    before = model.w_text.copy(), model.w_chart.copy()
    grad_check(model, (_sparse_batch(rng, 4, 32, 0.2), _sparse_batch(rng, 4, 32, 0.2)), n_coordinates=10)
    assert np.array_equal(model.w_text, before[0])
    assert np.array_equal(model.w_chart, before[1])


def test_weight_gradients_are_zero_for_inactive_features():
    rng = np.random.default_rng(2)
    model = DualEncoderModel.random(2, dim=8, n_text=32, n_chart=32)
    text_x = _sparse_batch(rng, 4, 32, 0.2)
    grad_text, _ = weight_gradients(model, text_x, _sparse_batch(rng, 4, 32, 0.2))
    inactive = np.asarray(abs(text_x).sum(axis=0)).ravel() == 0
    assert np.all(grad_text[inactive] == 0.0)


def test_build_pairs_selects_levels_in_order():
    charts = [make_chart("c-2"), make_chart("c-1")]
    insights = make_insights("c-1", 40) + make_insights("c-2", 40)
    pairs, skipped = build_pairs(charts, insights, {InsightLevel.TASK, InsightLevel.VISUAL})
    assert skipped == 0
    assert [(p.chart_id, p.level) for p in pairs] == [
        ("c-1", InsightLevel.VISUAL), ("c-1", InsightLevel.TASK),
        ("c-2", InsightLevel.VISUAL), ("c-2", InsightLevel.TASK),
    ]


def test_build_pairs_skips_charts_missing_a_level():
    charts = [make_chart("c-1"), make_chart("c-2")]
    insights = make_insights("c-1", 40) + [make_insight("c-2", InsightLevel.VISUAL)]
    pairs, skipped = build_pairs(charts, insights, set(ALL_LEVELS))
    assert skipped == 1
    assert {p.chart_id for p in pairs} == {"c-1"}
    assert len(pairs) == 3


def test_build_pairs_needs_a_level():
    with pytest.raises(ConfigError):
        build_pairs([make_chart("c-1")], make_insights("c-1", 40), set())


@pytest.mark.parametrize("changes", [
    {'levels': frozenset()},
    {'batch_size': 1},
    {'learning_rate': 0.0},
    {'tau': 0.0},
    {'epochs': -1},
])
def test_train_config_validation(changes):
    with pytest.raises(ConfigError):
        TrainConfig(**changes).validate()


def test_level_tag_follows_level_order():
    config = TrainConfig(levels=frozenset({InsightLevel.TASK, InsightLevel.VISUAL}))
    assert config.level_tag == "visual+task"


def _small_config(**changes):
    values = dict(batch_size=8, epochs=6, dim=16, seed=5)
    values.update(changes)
    return TrainConfig(**values)


def test_training_is_deterministic(small_corpus, tmp_path):
    charts, insights = small_corpus
    bank = FeatureBank(charts)
    first, log = train(charts, insights, _small_config(epochs=2), bank=bank)
    second, _ = train(charts, insights, _small_config(epochs=2), checkpoint_path=str(tmp_path / "model.bin"))
    assert np.array_equal(first.w_text, second.w_text)
    assert np.array_equal(first.w_chart, second.w_chart)
    assert log.n_pairs == 3 * len(charts)
    assert [epoch for epoch, _ in log.epoch_losses] == [1, 2]
    reloaded = DualEncoderModel.load(str(tmp_path / "model.bin"))
    assert reloaded.dim == 16


def test_training_lowers_the_loss(small_corpus):
    charts, insights = small_corpus
    _, log = train(charts, insights, _small_config())
    losses = [loss for _, loss in log.epoch_losses]
    assert losses[-1] < losses[0]


def test_training_changes_weights_from_init(small_corpus):
    charts, insights = small_corpus
    config = _small_config(epochs=1)
    model, log = Trainer(FeatureBank(charts), config).train(charts, insights)
    assert log.n_steps > 0
    assert not np.array_equal(model.w_chart, init_model(config).w_chart)


def test_too_few_pairs_for_a_batch():
    charts = [make_chart("c-1")]
    with pytest.raises(InsufficientDataError):
        train(charts, make_insights("c-1", 40), _small_config())


def test_log_frame_columns(small_corpus, tmp_path):
    charts, insights = small_corpus
    _, log = train(charts, insights, _small_config(epochs=1))
    path = tmp_path / "train_log.csv"
    log.write_csv(str(path))
    assert path.read_text().splitlines()[0] == "epoch,mean_loss"
