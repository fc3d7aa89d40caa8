"""
Pipeline Runner for chartsem.

Runs the stages of the corpus, training and benchmark pipeline against one
output directory. Stage methods raise typed errors; run() turns them into
(success, message) results.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bench.assemble import assemble_benchmark
from .bench.consensus import simulate_all, tally
from .bench.grouping import group_charts
from .bench.queries import attach_queries
from .bench.stats import benchmark_statistics
from .config import PipelineConfig
from .core.types import ChartSpec, GroupStatus, Insight
from .core.validation import validate_corpus
from .encoder.feature_bank import FeatureBank, visual_grouping_embeddings
from .encoder.model import DualEncoderModel, to_vectors
from .encoder.preprocess import DIRECT_RESIZE
from .encoder.remote import remote_embed
from .errors import ChartsemError, ValidationError
from .evaluation.experiments import (
    compare_preprocess,
    long_caption_eval,
    ocr_baseline,
    run_ablation,
    run_encoder_comparison,
)
from .evaluation.harness import chart_index, evaluate
from .evaluation.report import ablation_frame, deltas_frame, encoder_frame, results_frame, write_tables
from .insights.insight_manager import InsightManager
from .retrieval.index import VectorIndex
from .store.corpus_store import VOTES_FILE, CorpusStore, load_corpus, save_corpus
from .synth.recommend import recommend_charts
from .synth.render import render_svg
from .synth.tables import gen_corpus_tables
from .training.trainer import Trainer

logger = logging.getLogger(__name__)

MODEL_FILE = "model.bin"
EMBEDDINGS_FILE = "embeddings.bin"
REPORTS_DIR = "reports"

CORE_STAGES = ('synth', 'insights', 'train', 'embed', 'index', 'bench-build', 'queries', 'eval', 'stats')
FULL_STAGES = ('ablation', 'preprocess-compare')


class PipelineRunner:
    """Runs pipeline stages over one output directory."""

    def __init__(self, config: PipelineConfig, dry_run: bool = False):
        """
        Initialize the runner.

        Args:
            config: Validated pipeline configuration.
            dry_run: Compute and validate every stage without writing files.
        """
        self.config = config
        self.dry_run = dry_run
        self.store = CorpusStore(config.output_dir)
        self.failure: Optional[BaseException] = None
        self._bank: Optional[FeatureBank] = None
        self._bank_ids: Tuple[str, ...] = ()
        self.stages: Dict[str, Callable[[], str]] = {
            'synth': self.synth,
            'insights': self.insights,
            'train': self.train,
            'embed': self.embed,
            'index': self.index,
            'bench-build': self.bench_build,
            'queries': self.queries,
            'eval': self.eval,
            'stats': self.stats,
            'ablation': self.ablation,
            'ocr-eval': self.ocr_eval,
            'preprocess-compare': self.preprocess_compare,
            'encoder-compare': self.encoder_compare,
            'caption-eval': self.caption_eval,
        }

    def run(self, stage: str) -> Tuple[bool, str]:
        """
        Run one stage.

        Returns:
            Tuple of (success, message). On failure the exception is kept in
            self.failure.
        """
        self.failure = None
        try:
            message = self.stages[stage]()
            logger.info(f"Stage {stage}: {message}")
            return True, message
        except (ChartsemError, OSError) as e:
            logger.error(f"Stage {stage} failed: {e}", exc_info=True)
            self.failure = e
            return False, str(e)

    def run_all(self, full: bool = False) -> List[Tuple[str, bool, str]]:
        """Run the core stages in order (plus the long experiments when full); stop at the first failure."""
        results = []
        for stage in CORE_STAGES + (FULL_STAGES if full else ()):
            success, message = self.run(stage)
            results.append((stage, success, message))
            if not success:
                break
        return results

    # Helpers
    def _path(self, name: str) -> str:
        return str(self.store.path(name))

    def _corpus(self) -> Tuple[List[ChartSpec], List[Insight]]:
        self.store.require('charts.jsonl', "run the synth stage first")
        self.store.require('insights.jsonl', "run the insights stage first")
        return load_corpus(str(self.store.root))

    def _feature_bank(self, charts: Sequence[ChartSpec]) -> FeatureBank:
        ids = tuple(c.id for c in charts)
        if self._bank is None or self._bank_ids != ids:
            self._bank = FeatureBank(charts, jobs=self.config.jobs)
            self._bank_ids = ids
        return self._bank

    def _model(self) -> DualEncoderModel:
        return DualEncoderModel.load(self._path(MODEL_FILE))

    def _write_report(self, frame, name: str):
        if not self.dry_run:
            write_tables(frame, self._path(REPORTS_DIR), name)

    # Stages
    def synth(self) -> str:
        config = self.config
        tables = gen_corpus_tables(config.stage_seed('tables'), config.tables, list(config.profiles))
        charts: List[ChartSpec] = []
        for table in tables:
            charts.extend(recommend_charts(table, config.max_charts_per_table,
                                           style_seed=config.stage_seed('style'), canvas=config.canvas))
        violations = validate_corpus(charts, [], tables)
        if violations:
            raise ValidationError(f"{len(violations)} invalid charts: {violations[0]}",
                                  sorted({v.record_id for v in violations}))
        if not self.dry_run:
            self.store.save_tables(tables)
            self.store.save_charts(charts)
        return f"{len(tables)} tables, {len(charts)} charts"

    def insights(self) -> str:
        self.store.require('charts.jsonl', "run the synth stage first")
        charts = self.store.load_charts()
        tables = self.store.load_tables() if self.store.exists('tables.jsonl') else None
        endpoint = self.config.llm() if self.config.insight_backend == 'generative' else None
        insights, report = InsightManager(endpoint).synthesize_all(charts)
        skipped = {chart_id for chart_id, _ in report.skipped}
        kept = [c for c in charts if c.id not in skipped]
        if not self.dry_run:
            save_corpus(kept, insights, str(self.store.root), tables)
        else:
            violations = validate_corpus(kept, insights, tables)
            if violations:
                raise ValidationError(f"{len(violations)} invariant violation(s)",
                                      sorted({v.record_id for v in violations}))
        return f"{len(insights)} insights for {len(kept)} charts ({len(skipped)} skipped)"

    def train(self) -> str:
        charts, insights = self._corpus()
        trainer = Trainer(self._feature_bank(charts), self.config.train_config())
        model, log = trainer.train(charts, insights, None if self.dry_run else self._path(MODEL_FILE))
        if not self.dry_run:
            self.store.root.joinpath(REPORTS_DIR).mkdir(parents=True, exist_ok=True)
            log.write_csv(self._path(f"{REPORTS_DIR}/train_log.csv"))
        final = log.epoch_losses[-1][1] if log.epoch_losses else float('nan')
        return f"{log.n_pairs} pairs, {log.n_steps} steps, final loss {final:.4f}"

    def embed(self) -> str:
        charts, _ = self._corpus()
        model = self._model()
        index = chart_index(model, self._feature_bank(charts), DIRECT_RESIZE)
        if not self.dry_run:
            index.save(self._path(EMBEDDINGS_FILE))
        return f"{len(index)} chart embeddings of dim {index.dim}"

    def _load_index(self, charts: Sequence[ChartSpec]) -> VectorIndex:
        self.store.require(EMBEDDINGS_FILE, "run the embed stage first")
        return VectorIndex.load(self._path(EMBEDDINGS_FILE), [c.id for c in charts])

    def index(self) -> str:
        self.store.require('charts.jsonl', "run the synth stage first")
        charts = self.store.load_charts()
        index = self._load_index(charts)
        missing = sorted(set(c.id for c in charts) - set(index.ids))
        if missing:
            raise ValidationError("charts without an embedding", missing[:20])
        if not self.dry_run:
            index.save(self._path(EMBEDDINGS_FILE))
        return f"index of {len(index)} charts, dim {index.dim}"

    def _grouping_vectors(self, charts: Sequence[ChartSpec]):
        encoder = self.config.grouping_encoder
        ids = sorted(c.id for c in charts)
        if encoder == 'remote':
            by_id = {c.id: c for c in charts}
            vectors = remote_embed([{'svg': render_svg(by_id[i])} for i in ids],
                                   self.config.endpoints.embedder(self.config.jobs))
            return list(zip(ids, vectors))
        bank = self._feature_bank(charts)
        if encoder == 'model':
            matrix = self._model().embed_chart_matrix(bank.chart_matrix(DIRECT_RESIZE))
        else:
            matrix = visual_grouping_embeddings(bank, DIRECT_RESIZE, seed=self.config.stage_seed('grouping'))
        return list(zip(bank.chart_ids, to_vectors(matrix)))

    def bench_build(self) -> str:
        self.store.require('charts.jsonl', "run the synth stage first")
        charts = self.store.load_charts()
        groups = group_charts(self._grouping_vectors(charts), self.config.grouping, self.config.jobs)
        if not self.dry_run:
            self.store.save_groups(groups)
        return f"{len(groups)} candidate groups"

    def queries(self) -> str:
        self.store.require('groups.jsonl', "run the bench-build stage first")
        charts = {c.id: c for c in self.store.load_charts()}
        groups = self.store.load_groups()
        backend = self.config.llm() if self.config.query_backend == 'generative' else None
        with_queries = attach_queries(groups, charts, backend)
        generated = [q for g in with_queries for q in (g.precise_query, g.fuzzy_query)]

        votes = self.store.load_votes() if self.store.exists(VOTES_FILE) else []
        if votes:
            logger.info(f"Using {len(votes)} vote records from {VOTES_FILE}")
        else:
            v = self.config.votes
            votes = simulate_all(generated, self.config.stage_seed('votes'), v.n_raters, v.p_true,
                                 v.p_false, v.min_agree)
            if not self.dry_run:
                self.store.save_votes(votes)
        accepted, assembled = assemble_benchmark(with_queries, votes, charts.keys())
        if not self.dry_run:
            self.store.save_queries(accepted)
            self.store.save_groups(assembled)
        counts = tally(votes)
        n_groups = sum(1 for g in assembled if g.status == GroupStatus.ACCEPTED)
        return (f"{len(accepted)} accepted queries ({counts[GroupStatus.REJECTED]} rejected) "
                f"from {n_groups}/{len(assembled)} groups")

    def _benchmark(self):
        charts, insights = self._corpus()
        self.store.require('queries.jsonl', "run the queries stage first")
        return charts, insights, self.store.load_queries()

    def eval(self) -> str:
        charts, _, queries = self._benchmark()
        index = self._load_index(charts)
        model = self._model()
        result = evaluate(index, queries, model, self.config.metrics, "text_to_chart")
        self._write_report(results_frame([result], self.config.metrics), "eval")
        return f"{len(queries)} queries, overall {result.overall * 100:.2f}"

    def stats(self) -> str:
        charts, _, queries = self._benchmark()
        target_ids = {q.target_chart_id for q in queries}
        groups = [g for g in self.store.load_groups() if g.status == GroupStatus.ACCEPTED]
        members = {cid for g in groups for cid in g.member_ids} | target_ids
        summary = benchmark_statistics([c for c in charts if c.id in members], queries)
        self._write_report(summary.to_frame(), "benchmark_stats")
        return f"{summary.n_charts} charts, {summary.n_queries} queries"

    def ablation(self) -> str:
        charts, insights, queries = self._benchmark()
        rows = run_ablation(self._feature_bank(charts), insights, queries, self.config.train_config(),
                            self.config.metrics, jobs=1)
        self._write_report(ablation_frame(rows, self.config.metrics.k_rank), "ablation")
        best = max(rows, key=lambda r: r.result.overall)
        return f"{len(rows)} rows, best {best.tag} ({best.result.overall * 100:.2f})"

    def ocr_eval(self) -> str:
        charts, _, queries = self._benchmark()
        model = self._model()
        bank = self._feature_bank(charts)
        to_ocr = ocr_baseline(bank, queries, model, self.config.metrics)
        to_chart = evaluate(chart_index(model, bank, DIRECT_RESIZE), queries, model, self.config.metrics,
                            "text_to_chart")
        self._write_report(results_frame([to_chart, to_ocr], self.config.metrics), "ocr_eval")
        return f"text_to_chart {to_chart.overall * 100:.2f}, text_to_ocr {to_ocr.overall * 100:.2f}"

    def preprocess_compare(self) -> str:
        charts, insights, queries = self._benchmark()
        comparison = compare_preprocess(self._feature_bank(charts), insights, queries,
                                        self.config.train_config(), self.config.metrics)
        self._write_report(results_frame([comparison.resize, comparison.crop], self.config.metrics),
                           "preprocess")
        self._write_report(deltas_frame(comparison.deltas), "preprocess_deltas")
        return (f"direct_resize {comparison.resize.overall * 100:.2f}, "
                f"center_crop {comparison.crop.overall * 100:.2f}")

    def encoder_compare(self) -> str:
        charts, insights, queries = self._benchmark()
        rows = run_encoder_comparison(self._feature_bank(charts), insights, queries,
                                      self.config.train_config(), metrics=self.config.metrics)
        self._write_report(encoder_frame(rows, self.config.metrics.k_rank), "encoder_compare")
        return f"{len(rows)} encoder variants"

    def caption_eval(self) -> str:
        charts, insights = self._corpus()
        results = long_caption_eval(self._feature_bank(charts), insights, self._model(), self.config.metrics)
        self._write_report(results_frame(list(results.values()), self.config.metrics), "caption_eval")
        return ', '.join(f"{level.value} {r.overall * 100:.2f}" for level, r in results.items())
