"""
Full-scale directional checks: training beats the untrained encoder, all
three insight levels beat any single level, and direct resize beats center
crop. Each runs the core pipeline on a ~2,000 chart corpus per seed.
"""

import pytest

from chartsem.config import PipelineConfig
from chartsem.encoder.feature_bank import FeatureBank
from chartsem.encoder.preprocess import CENTER_CROP, DIRECT_RESIZE, preprocess
from chartsem.evaluation.experiments import compare_preprocess, evaluate_model, run_ablation
from chartsem.pipeline import PipelineRunner
from chartsem.store.corpus_store import CorpusStore, load_corpus
from chartsem.synth.raster import rasterize
from chartsem.training.trainer import init_model, train

pytestmark = pytest.mark.slow

SEEDS = (1, 2, 3)
TABLES = 550
SETUP_STAGES = ('synth', 'insights', 'bench-build', 'queries')


@pytest.fixture(scope="module")
def benchmarks(tmp_path_factory):
    """(charts, insights, queries) per seed, built by the pipeline stages."""
    built = {}
    for seed in SEEDS:
        out = tmp_path_factory.mktemp(f"seed{seed}")
        config = PipelineConfig(seed=seed, tables=TABLES, output_dir=str(out))
        runner = PipelineRunner(config)
        for stage in SETUP_STAGES:
            success, message = runner.run(stage)
            assert success, message
        charts, insights = load_corpus(str(out))
        queries = CorpusStore(str(out)).load_queries()
        assert len({q.group_id for q in queries}) >= 150
        built[seed] = (config, charts, insights, queries)
    return built


def test_training_lifts_recall_at_10(benchmarks):
    for seed, (config, charts, insights, queries) in benchmarks.items():
        bank = FeatureBank(charts)
        train_config = config.train_config()
        untrained = evaluate_model(init_model(train_config), bank, queries, DIRECT_RESIZE, config.metrics, "untrained")
        model, _ = train(charts, insights, train_config, bank=bank)
        trained = evaluate_model(model, bank, queries, DIRECT_RESIZE, config.metrics, "trained")
        lift = trained.combined.r_at[10] - untrained.combined.r_at[10]
        assert lift >= 0.30, f"seed {seed}: R@10 lift {lift:.3f}"


def test_all_levels_beat_single_levels(benchmarks):
    wins = 0
    for config, charts, insights, queries in benchmarks.values():
        rows = run_ablation(FeatureBank(charts), insights, queries, config.train_config(), config.metrics)
        singles = [row.result.overall for row in rows if len(row.levels) == 1]
        if rows[-1].result.overall >= max(singles):
            wins += 1
    assert wins >= 2


def test_resize_beats_crop(benchmarks):
    wins = 0
    for config, charts, insights, queries in benchmarks.values():
        comparison = compare_preprocess(FeatureBank(charts), insights, queries, config.train_config(),
                                        config.metrics)
        if comparison.resize.combined.r_at[10] >= comparison.crop.combined.r_at[10]:
            wins += 1
    assert wins >= 2


def test_crop_loses_y_axis_name_on_every_chart(benchmarks):
    for _, charts, _, _ in benchmarks.values():
        for spec in charts:
            grid = rasterize(spec)
            assert 'y_label' not in {a.role for a in preprocess(grid, CENTER_CROP).text_anchors}
            assert len(preprocess(grid, DIRECT_RESIZE).text_anchors) == len(grid.text_anchors)
