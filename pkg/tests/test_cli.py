import json
from pathlib import Path

import pytest

from chartsem.bench.queries import query_problems
from chartsem.main import EXIT_DOMAIN, EXIT_IO, EXIT_OK, EXIT_USAGE, main

SMALL_CONFIG = """
[train]
batch_size = 16
epochs = 2
dim = 32
"""


@pytest.fixture(autouse=True)
def log_home(monkeypatch, tmp_path):
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path / "xdg"))
    for variable in ("CSEM_LLM_URL", "CSEM_EMBED_URL"):
        monkeypatch.delenv(variable, raising=False)


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL_CONFIG)
    return str(path)


def _read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def _tree(root):
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(Path(root).rglob("*")) if p.is_file()}


def test_unknown_command_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["bogus"])
    assert excinfo.value.code == EXIT_USAGE


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["synth", "--colour"])
    assert excinfo.value.code == EXIT_USAGE


def test_invalid_config_exits_with_domain_code(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("[pipeline]\nseeds = 1\n")
    assert main(["synth", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_DOMAIN


def test_missing_artifact_exits_with_domain_code(tmp_path, capsys):
    assert main(["eval", "--out", str(tmp_path / "empty")]) == EXIT_DOMAIN
    assert "missing file" in capsys.readouterr().err


def test_unwritable_output_exits_with_io_code(tmp_path):
    blocker = tmp_path / "occupied"
    blocker.write_text("not a directory")
    assert main(["synth", "--tables", "2", "--out", str(blocker)]) == EXIT_IO


def test_dry_run_writes_nothing(tmp_path):
    out = tmp_path / "dry"
    assert main(["synth", "--tables", "3", "--dry-run", "--out", str(out)]) == EXIT_OK
    assert not out.exists() or not any(out.iterdir())


def _run_all(out, config):
    return main(["all", "--seed", "7", "--tables", "12", "--config", config, "--out", str(out)])


def test_full_run_invariants_and_reproducibility(tmp_path, small_config, capsys):
    first, second = tmp_path / "run1", tmp_path / "run2"
    assert _run_all(first, small_config) == EXIT_OK
    printed = capsys.readouterr().out
    assert "stats: ok" in printed

    charts = _read_jsonl(first / "charts.jsonl")
    insights = _read_jsonl(first / "insights.jsonl")
    assert len(charts) > 0
    assert len(insights) == 3 * len(charts)
    assert len(list((first / "svg").glob("*.svg"))) >= len(charts)

    chart_ids = {c["id"] for c in charts}
    for group in _read_jsonl(first / "groups.jsonl"):
        assert len(group["distractor_ids"]) == 4
        assert group["target_id"] not in group["distractor_ids"]
        assert set(group["distractor_ids"]) <= chart_ids
        assert all(s >= 0.90 for s in group["anchor_similarities"])
    for query in _read_jsonl(first / "queries.jsonl"):
        assert query_problems(query["text"]) == []
        assert query["target_chart_id"] in chart_ids
    assert (first / "model.bin").exists()
    assert (first / "embeddings.bin").exists()
    assert (first / "reports" / "eval.csv").exists()

    assert _run_all(second, small_config) == EXIT_OK
    assert _tree(first) == _tree(second)


def test_stages_can_be_rerun_individually(tmp_path, small_config):
    out = tmp_path / "run"
    assert _run_all(out, small_config) == EXIT_OK
    before = (out / "embeddings.bin").read_bytes()
    assert main(["index", "--config", small_config, "--out", str(out)]) == EXIT_OK
    assert (out / "embeddings.bin").read_bytes() == before
    assert main(["caption-eval", "--config", small_config, "--out", str(out)]) == EXIT_OK
    assert (out / "reports" / "caption_eval.md").exists()
    assert main(["ocr-eval", "--config", small_config, "--out", str(out)]) == EXIT_OK
    assert (out / "reports" / "ocr_eval.csv").exists()
