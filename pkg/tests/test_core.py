import math
import re
from dataclasses import replace

import numpy as np
import pytest

from chartsem.core.ids import chart_id, derive_seed, group_id, query_id, table_id
from chartsem.core.types import (
    ChartType,
    Column,
    ColumnKind,
    EmbeddingVector,
    InsightLevel,
    Series,
    StyleParams,
    Table,
)
from chartsem.core.validation import validate_chart, validate_corpus, validate_table
from helpers import make_chart, make_insight, make_insights


def test_derive_seed_is_deterministic_and_label_sensitive():
    assert derive_seed(7, 'tables') == derive_seed(7, 'tables')
    assert derive_seed(7, 'tables') != derive_seed(7, 'style')
    assert derive_seed(7, 'tables') != derive_seed(8, 'tables')
    assert derive_seed(7, 'a', 'b') != derive_seed(7, 'b', 'a')
    assert 0 <= derive_seed(2 ** 70, 'x') < 2 ** 64


def test_id_formats():
    tid = table_id(3, 0)
    assert re.fullmatch(r"tbl-00003-[0-9a-f]{6}", tid)
    assert table_id(3, 0) == tid
    assert chart_id(tid, 2) == f"{tid}-c02"
    assert group_id("tbl-00003-abcdef-c02") == "grp-tbl-00003-abcdef-c02"
    assert query_id("grp-a", "precise") == "grp-a-p"
    assert query_id("grp-a", "fuzzy") == "grp-a-f"


def test_embedding_vector_is_unit_norm():
    vec = EmbeddingVector.from_array([3.0, 4.0])
    assert vec.dim == 2
    assert abs(np.linalg.norm(vec.values) - 1.0) <= 1e-9
    np.testing.assert_allclose(vec.values, [0.6, 0.8])


def test_zero_embedding_becomes_sentinel():
    vec = EmbeddingVector.from_array(np.zeros(4))
    np.testing.assert_allclose(vec.values, np.full(4, 0.5))
    with pytest.raises(ValueError):
        EmbeddingVector.from_array(np.zeros(4), sentinel_if_zero=False)


def test_non_finite_embedding_rejected():
    with pytest.raises(ValueError):
        EmbeddingVector.from_array([1.0, math.nan])
    with pytest.raises(ValueError):
        EmbeddingVector.from_array([])


def test_valid_corpus_has_no_violations():
    charts = [make_chart("c1"), make_chart("c2", ChartType.PIE)]
    insights = make_insights("c1") + make_insights("c2")
    assert validate_corpus(charts, insights) == []


def test_insight_for_unknown_chart_is_one_violation():
    violations = validate_corpus([make_chart("c1")], make_insights("c1") + [make_insight("ghost")])
    assert len(violations) == 1
    assert violations[0].record_id == "ghost/visual"


def test_pie_with_negative_slice_is_one_violation():
    pie = make_chart("p1", ChartType.PIE, points=(("a", 2.0), ("b", -1.0)))
    violations = validate_corpus([pie], [])
    assert len(violations) == 1
    assert "negative" in violations[0].message


def test_short_template_insight_is_a_violation():
    violations = validate_corpus([make_chart("c1")], [make_insight("c1", InsightLevel.TASK, words=5)])
    assert [v.record_id for v in violations] == ["c1/task"]


def test_chart_invariants():
    assert validate_chart(make_chart("c1", points=(("a", 1.0), ("a", 2.0))))
    assert validate_chart(make_chart("c1", series=()))
    two_series = (Series("x", (("a", 1.0),)), Series("y", (("a", 2.0),)))
    assert validate_chart(make_chart("c1", ChartType.PIE, series=two_series, categories=("x", "y")))
    narrow = replace(make_chart("c1"), style=StyleParams(canvas_w=32))
    assert any("64" in p for p in validate_chart(narrow))


def test_table_invariants():
    columns = (Column("region", ColumnKind.CATEGORICAL), Column("year", ColumnKind.TEMPORAL),
               Column("sales", ColumnKind.NUMERIC))
    good = Table("t", columns, (("north", "2012", 1.5), ("south", "2013-04", 2.0)))
    assert validate_table(good) == []
    bad_month = Table("t", columns, (("north", "2012-13", 1.5),))
    assert validate_table(bad_month)
    missing = Table("t", columns, (("north", "2012", None),))
    assert validate_table(missing)
    wide = Table("t", columns, (("north", "2012", 1.0, 2.0),))
    assert validate_table(wide)
    duplicate = Table("t", (Column("a", ColumnKind.NUMERIC), Column("a", ColumnKind.NUMERIC)), ())
    assert validate_table(duplicate)


def test_table_problem_reported_against_charts():
    table = Table("tbl-1", (Column("a", ColumnKind.CATEGORICAL), Column("b", ColumnKind.NUMERIC)),
                  (("x", 1.0, 2.0),))
    chart = make_chart("tbl-1-c00", table_id="tbl-1")
    violations = validate_corpus([chart], [], [table])
    assert {v.record_id for v in violations} == {"tbl-1-c00"}


def test_records_round_trip_through_dicts():
    chart = make_chart("c1", ChartType.GROUPED_LINE,
                       series=(Series("x", (("2001", 1.0), ("2002", 2.0))),
                               Series("y", (("2001", 3.0), ("2002", 4.0)))),
                       categories=("x", "y"))
    assert chart.__class__.from_dict(chart.to_dict()) == chart
    assert list(chart.to_dict())[:3] == ["id", "chart_type", "title"]
