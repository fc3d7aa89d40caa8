"""
Pipeline configuration for chartsem.

Settings come from a TOML file, then environment variables for the external
endpoints, then command-line flags. Every seed is explicit; the default
global seed is 0.
"""

import logging
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional, Tuple

from .bench.grouping import GroupingConfig
from .core.ids import derive_seed
from .core.types import InsightLevel, PreprocessKind
from .encoder.preprocess import PreprocessMode
from .encoder.remote import RemoteEmbedConfig
from .errors import ConfigError
from .evaluation.metrics import MetricConfig
from .insights.generative import EndpointConfig
from .store.corpus_store import default_corpus_dir
from .synth.tables import SchemaProfile
from .training.trainer import TrainConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

BACKENDS = ('template', 'generative')
GROUPING_ENCODERS = ('visual', 'model', 'remote')

_SECTIONS: Dict[str, Tuple[str, ...]] = {
    'pipeline': ('seed', 'output_dir', 'tables', 'max_charts_per_table', 'jobs'),
    'synth': ('canvas_w', 'canvas_h', 'profiles'),
    'insights': ('backend',),
    'train': ('levels', 'batch_size', 'epochs', 'learning_rate', 'momentum', 'tau', 'dim', 'preprocess'),
    'grouping': ('threshold', 'group_size', 'distractor_reuse', 'encoder'),
    'queries': ('backend',),
    'metrics': ('k_list', 'k_rank'),
    'votes': ('n_raters', 'min_agree', 'p_true', 'p_false'),
    'endpoints': ('llm_url', 'llm_model', 'llm_timeout', 'embed_url', 'embed_dim'),
}

_ENV = {
    'CSEM_LLM_URL': ('llm_url', str),
    'CSEM_LLM_MODEL': ('llm_model', str),
    'CSEM_LLM_TIMEOUT': ('llm_timeout', float),
    'CSEM_EMBED_URL': ('embed_url', str),
    'CSEM_EMBED_DIM': ('embed_dim', int),
}


@dataclass(frozen=True)
class VoteConfig:
    n_raters: int = 9
    min_agree: int = 5
    p_true: float = 0.9
    p_false: float = 0.3

    def validate(self):
        if not 1 <= self.min_agree <= self.n_raters:
            raise ConfigError(f"min_agree must be in [1, n_raters], got {self.min_agree}/{self.n_raters}")
        for name in ('p_true', 'p_false'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must be a probability")


@dataclass(frozen=True)
class Endpoints:
    llm_url: str = ""
    llm_model: str = ""
    llm_timeout: float = 30.0
    embed_url: str = ""
    embed_dim: Optional[int] = None

    def llm(self, concurrency: int = 4) -> Optional[EndpointConfig]:
        if not self.llm_url:
            return None
        return EndpointConfig(self.llm_url, self.llm_model, timeout=self.llm_timeout, concurrency=concurrency)

    def embedder(self, concurrency: int = 4) -> Optional[RemoteEmbedConfig]:
        if not self.embed_url:
            return None
        return RemoteEmbedConfig(self.embed_url, self.embed_dim, timeout=self.llm_timeout, concurrency=concurrency)


@dataclass(frozen=True)
class PipelineConfig:
    seed: int = 0
    output_dir: str = field(default_factory=default_corpus_dir)
    tables: int = 200
    max_charts_per_table: int = 4
    jobs: int = 1
    canvas: Tuple[int, int] = (800, 500)
    profiles: Tuple[SchemaProfile, ...] = ()
    insight_backend: str = 'template'
    query_backend: str = 'template'
    train: TrainConfig = field(default_factory=TrainConfig)
    grouping: GroupingConfig = field(default_factory=GroupingConfig)
    grouping_encoder: str = 'visual'
    metrics: MetricConfig = field(default_factory=MetricConfig)
    votes: VoteConfig = field(default_factory=VoteConfig)
    endpoints: Endpoints = field(default_factory=Endpoints)

    def validate(self):
        if self.tables < 1:
            raise ConfigError(f"tables must be >= 1, got {self.tables}")
        if self.max_charts_per_table < 1:
            raise ConfigError(f"max_charts_per_table must be >= 1, got {self.max_charts_per_table}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if min(self.canvas) < 64:
            raise ConfigError(f"canvas too small: {self.canvas}")
        for name in ('insight_backend', 'query_backend'):
            if getattr(self, name) not in BACKENDS:
                raise ConfigError(f"{name} must be one of {BACKENDS}")
        if self.grouping_encoder not in GROUPING_ENCODERS:
            raise ConfigError(f"grouping encoder must be one of {GROUPING_ENCODERS}")
        if self.grouping_encoder == 'remote' and not self.endpoints.embed_url:
            raise ConfigError("grouping encoder 'remote' needs endpoints.embed_url (or CSEM_EMBED_URL)")
        for name in ('insight_backend', 'query_backend'):
            if getattr(self, name) == 'generative' and not self.endpoints.llm_url:
                raise ConfigError(f"{name} 'generative' needs endpoints.llm_url (or CSEM_LLM_URL)")
        self.train.validate()
        self.grouping.validate()
        self.metrics.validate()
        self.votes.validate()

    def stage_seed(self, *labels) -> int:
        return derive_seed(self.seed, *labels)

    def train_config(self) -> TrainConfig:
        """Training settings with the seed derived from the global seed."""
        return replace(self.train, seed=self.stage_seed('train'))

    def llm(self) -> Optional[EndpointConfig]:
        return self.endpoints.llm(concurrency=max(4, self.jobs))


def _check_keys(data: Mapping[str, Any]):
    for section, values in data.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(values, dict):
            raise ConfigError(f"[{section}] must be a table")
        unknown = sorted(set(values) - set(_SECTIONS[section]))
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def _train_from(values: Dict[str, Any]) -> TrainConfig:
    base = TrainConfig()
    try:
        levels = frozenset(InsightLevel(v) for v in values.get('levels', [lv.value for lv in base.levels]))
        preprocess = PreprocessMode(PreprocessKind(values.get('preprocess', base.preprocess.kind.value)))
        return TrainConfig(
            levels=levels,
            batch_size=int(values.get('batch_size', base.batch_size)),
            epochs=int(values.get('epochs', base.epochs)),
            learning_rate=float(values.get('learning_rate', base.learning_rate)),
            momentum=float(values.get('momentum', base.momentum)),
            tau=float(values.get('tau', base.tau)),
            dim=int(values.get('dim', base.dim)),
            preprocess=preprocess,
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid [train] section: {e}") from e


def config_from_dict(data: Mapping[str, Any]) -> PipelineConfig:
    """Build a PipelineConfig from parsed TOML; unknown keys are errors."""
    _check_keys(data)
    pipeline = data.get('pipeline', {})
    synth = data.get('synth', {})
    grouping = dict(data.get('grouping', {}))
    endpoints = data.get('endpoints', {})
    defaults = PipelineConfig()
    try:
        config = PipelineConfig(
            seed=int(pipeline.get('seed', defaults.seed)),
            output_dir=str(pipeline.get('output_dir', defaults.output_dir)),
            tables=int(pipeline.get('tables', defaults.tables)),
            max_charts_per_table=int(pipeline.get('max_charts_per_table', defaults.max_charts_per_table)),
            jobs=int(pipeline.get('jobs', defaults.jobs)),
            canvas=(int(synth.get('canvas_w', 800)), int(synth.get('canvas_h', 500))),
            profiles=tuple(SchemaProfile.from_dict(p) for p in synth.get('profiles', [])),
            insight_backend=str(data.get('insights', {}).get('backend', 'template')),
            query_backend=str(data.get('queries', {}).get('backend', 'template')),
            train=_train_from(data.get('train', {})),
            grouping_encoder=str(grouping.pop('encoder', 'visual')),
            grouping=GroupingConfig.from_dict(grouping),
            metrics=MetricConfig.from_dict(data.get('metrics', {})),
            votes=VoteConfig(**data.get('votes', {})),
            endpoints=Endpoints(
                llm_url=str(endpoints.get('llm_url', '')),
                llm_model=str(endpoints.get('llm_model', '')),
                llm_timeout=float(endpoints.get('llm_timeout', 30.0)),
                embed_url=str(endpoints.get('embed_url', '')),
                embed_dim=int(endpoints['embed_dim']) if 'embed_dim' in endpoints else None,
            ),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid configuration value: {e}") from e
    return config


def apply_env(config: PipelineConfig, env: Mapping[str, str]) -> PipelineConfig:
    """Override endpoint settings from CSEM_* environment variables."""
    overrides: Dict[str, Any] = {}
    for variable, (name, cast) in _ENV.items():
        if env.get(variable):
            try:
                overrides[name] = cast(env[variable])
            except ValueError as e:
                raise ConfigError(f"invalid {variable}: {e}") from e
            logger.debug(f"Endpoint setting {name} taken from {variable}")
    if not overrides:
        return config
    return replace(config, endpoints=replace(config.endpoints, **overrides))


def load_config(path: Optional[str] = None, env: Optional[Mapping[str, str]] = None) -> PipelineConfig:
    """
    Load the pipeline configuration.

    Args:
        path: TOML file; defaults only when None.
        env: Environment mapping (os.environ when None).

    Raises:
        ConfigError: On unknown keys, bad values or unparseable TOML.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, 'rb') as f:
                data = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
        logger.info(f"Loaded configuration from {path}")
    return apply_env(config_from_dict(data), os.environ if env is None else env)


def with_overrides(config: PipelineConfig, seed: Optional[int] = None, tables: Optional[int] = None,
                   jobs: Optional[int] = None, output_dir: Optional[str] = None) -> PipelineConfig:
    """Apply command-line flags on top of file and environment settings."""
    changes: Dict[str, Any] = {}
    if seed is not None:
        changes['seed'] = seed
    if tables is not None:
        changes['tables'] = tables
    if jobs is not None:
        changes['jobs'] = jobs
    if output_dir is not None:
        changes['output_dir'] = output_dir
    return replace(config, **changes) if changes else config
