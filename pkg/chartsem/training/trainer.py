"""
Contrastive trainer for chartsem.

SGD with momentum on both towers, in-batch negatives, seeded shuffles and a
fixed summation order so a seed reproduces the weights bit for bit.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..core.ids import derive_seed
from ..core.types import ALL_LEVELS, ChartSpec, Insight, InsightLevel
from ..encoder.feature_bank import FeatureBank
from ..encoder.model import DEFAULT_DIM, DEFAULT_TAU, DualEncoderModel
from ..encoder.preprocess import DIRECT_RESIZE, PreprocessMode
from ..errors import ConfigError, InsufficientDataError
from .loss import info_nce
from .pairs import TrainPair, build_pairs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    levels: FrozenSet[InsightLevel] = frozenset(ALL_LEVELS)
    batch_size: int = 64
    epochs: int = 20
    learning_rate: float = 1e-2
    momentum: float = 0.9
    tau: float = DEFAULT_TAU
    dim: int = DEFAULT_DIM
    seed: int = 0
    preprocess: PreprocessMode = DIRECT_RESIZE

    def validate(self):
        if not self.levels:
            raise ConfigError("train levels must be non-empty")
        if self.batch_size < 2:
            raise ConfigError(f"batch_size must be >= 2, got {self.batch_size}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not self.tau > 0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")

    @property
    def level_tag(self) -> str:
        return '+'.join(level.value for level in ALL_LEVELS if level in self.levels)


@dataclass
class TrainLog:
    epoch_losses: List[Tuple[int, float]] = field(default_factory=list)
    n_pairs: int = 0
    n_steps: int = 0
    skipped_charts: int = 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.epoch_losses, columns=['epoch', 'mean_loss'])

    def write_csv(self, path: str):
        self.to_frame().to_csv(path, index=False, float_format='%.10g', lineterminator='\n')


def init_model(config: TrainConfig) -> DualEncoderModel:
    """Seeded random model; the untrained baseline of every experiment."""
    return DualEncoderModel.random(derive_seed(config.seed, 'init'), dim=config.dim, tau=config.tau)


class Trainer:
    """Trains a DualEncoderModel from a FeatureBank."""

    def __init__(self, bank: FeatureBank, config: TrainConfig):
        """
        Initialize the trainer.

        Args:
            bank: Feature cache of the training corpus.
            config: Training configuration.
        """
        config.validate()
        self.bank = bank
        self.config = config

    def train_pairs(self, pairs: Sequence[TrainPair], checkpoint_path: Optional[str] = None,
                    skipped_charts: int = 0) -> Tuple[DualEncoderModel, TrainLog]:
        config = self.config
        if len(pairs) < config.batch_size:
            raise InsufficientDataError(
                f"need at least batch_size={config.batch_size} pairs, got {len(pairs)}"
            )
        text_x = self.bank.text_matrix([p.text for p in pairs])
        chart_x = self.bank.chart_matrix(config.preprocess)[self.bank.rows([p.chart_id for p in pairs])]

        model = init_model(config)
        velocity_text = np.zeros_like(model.w_text)
        velocity_chart = np.zeros_like(model.w_chart)
        log = TrainLog(n_pairs=len(pairs), skipped_charts=skipped_charts)
        n = len(pairs)

        for epoch in range(1, config.epochs + 1):
            rng = np.random.default_rng(derive_seed(config.seed, 'shuffle', epoch))
            order = rng.permutation(n)
            losses = []
            for start in range(0, n, config.batch_size):
                idx = order[start:start + config.batch_size]
                if idx.size < 2:
                    continue
                bt, bc = text_x[idx], chart_x[idx]
                loss, grad_t, grad_c = info_nce(model.project_text(bt), model.project_chart(bc), model.tau)
                velocity_text *= config.momentum
                velocity_text += bt.T @ grad_t
                velocity_chart *= config.momentum
                velocity_chart += bc.T @ grad_c
                model.w_text -= config.learning_rate * velocity_text
                model.w_chart -= config.learning_rate * velocity_chart
                losses.append(loss)
                log.n_steps += 1
            mean_loss = float(np.mean(losses)) if losses else float('nan')
            log.epoch_losses.append((epoch, mean_loss))
            logger.info(f"Epoch {epoch}/{config.epochs} [{config.level_tag}] mean loss {mean_loss:.6f}")
            if checkpoint_path:
                model.save(checkpoint_path)
        return model, log

    def train(self, charts: Sequence[ChartSpec], insights: Sequence[Insight],
              checkpoint_path: Optional[str] = None) -> Tuple[DualEncoderModel, TrainLog]:
        pairs, skipped = build_pairs(charts, insights, self.config.levels)
        logger.info(f"Training on {len(pairs)} pairs ({self.config.level_tag})")
        return self.train_pairs(pairs, checkpoint_path, skipped)


def train(charts: Sequence[ChartSpec], insights: Sequence[Insight], config: TrainConfig,
          checkpoint_path: Optional[str] = None, bank: Optional[FeatureBank] = None,
          ) -> Tuple[DualEncoderModel, TrainLog]:
    """
    Train a dual encoder on a corpus.

    Args:
        charts: Corpus charts.
        insights: Corpus insights.
        config: Training configuration.
        checkpoint_path: Checkpoint overwritten after every epoch, if given.
        bank: Prebuilt feature cache (built from charts when None).

    Returns:
        Tuple of (trained model, TrainLog).
    """
    return Trainer(bank or FeatureBank(charts), config).train(charts, insights, checkpoint_path)
