"""
Synthetic table generator for chartsem.

Builds themed, cleaned tables whose numeric columns carry a trend, seasonal,
random-walk or heavy-tailed signal so the statistical tasks have something
to find.
"""

import logging
import math
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence

import numpy as np

from ..core.ids import derive_seed, table_id as make_table_id
from ..core.types import Column, ColumnKind, Table
from ..data.themes import TEMPORAL_COLUMNS, THEME_NAMES, THEMES
from ..errors import ConfigError

logger = logging.getLogger(__name__)

GENERATORS = ('linear', 'seasonal', 'walk', 'heavy_tail')

# Quantities that may legitimately go negative.
SIGNED_COLUMNS = {'mean temperature', 'variance', 'growth rate'}

MAX_CATEGORICAL = 2
MAX_TEMPORAL = 1
MAX_NUMERIC = 4


@dataclass(frozen=True)
class SchemaProfile:
    n_categorical: int
    n_numeric: int
    n_temporal: int
    n_rows: int
    vocab_theme: str

    def problems(self) -> List[str]:
        problems = []
        if not 1 <= self.n_numeric <= MAX_NUMERIC:
            problems.append(f"n_numeric must be in [1, {MAX_NUMERIC}]")
        if not 0 <= self.n_categorical <= MAX_CATEGORICAL:
            problems.append(f"n_categorical must be in [0, {MAX_CATEGORICAL}]")
        if not 0 <= self.n_temporal <= MAX_TEMPORAL:
            problems.append(f"n_temporal must be in [0, {MAX_TEMPORAL}]")
        if self.n_categorical + self.n_temporal < 1:
            problems.append("need at least one categorical or temporal column")
        if not 5 <= self.n_rows <= 200:
            problems.append("n_rows must be in [5, 200]")
        if self.vocab_theme not in THEMES:
            problems.append(f"unknown theme '{self.vocab_theme}'")
        return problems

    def validate(self):
        problems = self.problems()
        if problems:
            raise ConfigError(f"invalid schema profile {self}: {'; '.join(problems)}")

    @classmethod
    def from_dict(cls, data) -> "SchemaProfile":
        try:
            profile = cls(
                n_categorical=int(data.get('n_categorical', 1)),
                n_numeric=int(data.get('n_numeric', 1)),
                n_temporal=int(data.get('n_temporal', 0)),
                n_rows=int(data.get('n_rows', 24)),
                vocab_theme=str(data['vocab_theme']),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"invalid schema profile {data!r}: {e}") from e
        profile.validate()
        return profile


def random_profile(rng: np.random.Generator) -> SchemaProfile:
    """Draw a valid profile; used when no profiles are configured."""
    theme = THEME_NAMES[int(rng.integers(len(THEME_NAMES)))]
    n_temporal = int(rng.random() < 0.55)
    n_categorical = int(rng.choice([0, 1, 1, 2])) if n_temporal else int(rng.choice([1, 1, 2]))
    n_numeric = int(rng.integers(1, MAX_NUMERIC + 1))
    n_rows = int(rng.integers(8, 61))
    return SchemaProfile(n_categorical, n_numeric, n_temporal, n_rows, theme)


def _decimals(scale: float) -> int:
    return max(0, 3 - int(math.floor(math.log10(scale))))


def _periods(rng: np.random.Generator, granularity: str, count: int) -> List[str]:
    if granularity == 'year':
        start = int(rng.integers(1950, 2016))
        return [f"{start + i:04d}" for i in range(count)]
    start_year = int(rng.integers(1990, 2016))
    start_month = int(rng.integers(0, 12))
    labels = []
    for i in range(count):
        month = start_month + i
        labels.append(f"{start_year + month // 12:04d}-{month % 12 + 1:02d}")
    return labels


def _signal(rng: np.random.Generator, kind: str, steps: np.ndarray, scale: float) -> np.ndarray:
    span = max(1.0, float(steps.max()) if steps.size else 1.0)
    t = steps / span
    if kind == 'linear':
        slope = float(rng.uniform(0.3, 1.2)) * (1 if rng.random() < 0.6 else -1)
        base = 1.0 + slope * t - min(0.0, slope)
    elif kind == 'seasonal':
        phase = float(rng.uniform(0, 2 * math.pi))
        base = 1.0 + 0.35 * np.sin(2 * math.pi * steps / 12.0 + phase)
    elif kind == 'walk':
        increments = rng.normal(0.0, 0.08, size=int(span) + 1)
        base = 1.0 + np.cumsum(increments)[steps.astype(int)]
    else:
        base = rng.lognormal(0.0, 0.7, size=steps.size)
    return scale * base


def gen_table(seed: int, profile: SchemaProfile, table_id: Optional[str] = None) -> Table:
    """
    Generate one synthetic table.

    Args:
        seed: Table seed; identical (seed, profile) give identical tables.
        profile: Column counts, row count and theme.
        table_id: Id to assign. Defaults to an id derived from the seed.

    Returns:
        A valid Table with no missing cells.
    """
    profile.validate()
    rng = np.random.default_rng(derive_seed(seed, 'table', profile.vocab_theme))
    theme = THEMES[profile.vocab_theme]

    cat_names = sorted(theme['categorical'])
    chosen_cats = [cat_names[i] for i in sorted(rng.choice(len(cat_names), profile.n_categorical, replace=False))]
    num_names = sorted(theme['numeric'])
    chosen_nums = [num_names[i] for i in sorted(rng.choice(len(num_names), profile.n_numeric, replace=False))]
    temporal_names = sorted(TEMPORAL_COLUMNS)
    chosen_temporal = [temporal_names[int(rng.integers(len(temporal_names)))]] if profile.n_temporal else []

    # Key dimensions: periods (outer) then categorical values.
    dims: List[List[str]] = []
    cat_sizes = []
    for i, name in enumerate(chosen_cats):
        vocab = theme['categorical'][name]
        if chosen_temporal:
            k = int(rng.integers(2, min(4, len(vocab)) + 1))
        elif i == 0 and len(chosen_cats) == 1:
            k = int(rng.integers(3, min(len(vocab), profile.n_rows) + 1))
        else:
            k = int(rng.integers(2, min(5, len(vocab)) + 1))
        picks = sorted(rng.choice(len(vocab), k, replace=False))
        cat_sizes.append(k)
        dims.append([vocab[p] for p in picks])
    if chosen_temporal:
        per_period = int(np.prod(cat_sizes)) if cat_sizes else 1
        n_periods = max(4, math.ceil(profile.n_rows / per_period))
        dims.insert(0, _periods(rng, TEMPORAL_COLUMNS[chosen_temporal[0]], n_periods))

    keys = list(product(*dims))
    key_rows = [keys[r % len(keys)] for r in range(profile.n_rows)]

    # Positional step of each row along the time axis (or row order).
    if chosen_temporal:
        index_of = {p: i for i, p in enumerate(dims[0])}
        steps = np.array([index_of[k[0]] for k in key_rows], dtype=float)
        cat_offset = 1
    else:
        steps = np.arange(profile.n_rows, dtype=float)
        cat_offset = 0

    numeric_columns = []
    for name in chosen_nums:
        scale = theme['numeric'][name]
        kind = GENERATORS[int(rng.integers(len(GENERATORS)))]
        values = _signal(rng, kind, steps, scale)
        for d, name_cat in enumerate(chosen_cats):
            multipliers = {v: float(rng.uniform(0.4, 1.9)) for v in dims[d + cat_offset]}
            values = values * np.array([multipliers[k[d + cat_offset]] for k in key_rows])
        values = values + rng.normal(0.0, 0.04 * scale, size=values.size)
        if name not in SIGNED_COLUMNS:
            values = np.abs(values)
        decimals = _decimals(scale)
        numeric_columns.append([round(float(v), decimals) + 0.0 for v in values])

    columns = (
        [Column(name, ColumnKind.TEMPORAL) for name in chosen_temporal]
        + [Column(name, ColumnKind.CATEGORICAL) for name in chosen_cats]
        + [Column(name, ColumnKind.NUMERIC) for name in chosen_nums]
    )
    rows = []
    for r, key in enumerate(key_rows):
        rows.append(tuple(key) + tuple(col[r] for col in numeric_columns))

    return Table(
        id=table_id or f"tbl-{seed & 0xFFFFFFFF:08x}",
        columns=tuple(columns),
        rows=tuple(rows),
        theme=profile.vocab_theme,
    )


def gen_corpus_tables(seed: int, n_tables: int,
                      profiles: Optional[Sequence[SchemaProfile]] = None) -> List[Table]:
    """
    Generate the tables of a corpus.

    Args:
        seed: Global seed.
        n_tables: Number of tables.
        profiles: Profiles to cycle through; random valid profiles when empty.

    Returns:
        Tables ordered by id.
    """
    profile_rng = np.random.default_rng(derive_seed(seed, 'profiles'))
    tables = []
    for i in range(n_tables):
        profile = profiles[i % len(profiles)] if profiles else random_profile(profile_rng)
        tables.append(gen_table(derive_seed(seed, 'table', i), profile, make_table_id(i, seed)))
        if (i + 1) % 500 == 0:
            logger.info(f"Generated {i + 1}/{n_tables} tables")
    logger.info(f"Generated {len(tables)} tables")
    return sorted(tables, key=lambda t: t.id)
