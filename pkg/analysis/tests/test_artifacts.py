"""Artifact readers: typing, header checks, cross-file agreement."""

from __future__ import annotations

import shutil

import pytest

from semslice_analysis import (
    MissingArtifact,
    RunArtifacts,
    SchemaMismatch,
    load_run,
    read_comparison,
    read_summary,
    read_table,
)
from semslice_analysis.artifacts import (
    COMPARISON_FILE,
    LEDGER_COLUMNS,
    LEDGER_FILE,
    SERIES_COLUMNS,
    SERIES_FILE,
    SUMMARY_FILE,
)

POLICIES = ["static", "dns", "context", "semantic"]


def test_comparison_rows_are_typed(comparison_dir):
    rows = read_comparison(comparison_dir)
    assert [row["policy"] for row in rows] == POLICIES
    for row in rows:
        assert isinstance(row["qos_satisfaction_rate"], float)
        assert isinstance(row["sla_violation_count"], int)
        assert 0.0 <= row["qos_satisfaction_rate"] <= 1.0


def test_load_run_parses_all_five_files(semantic_run_dir):
    data = load_run(semantic_run_dir)
    assert data.summary["policy"] == "semantic"
    assert len(data.series) == data.summary["duration_ticks"]
    assert data.events and data.actions and data.ledger
    ticks = [row["tick"] for row in data.series]
    assert ticks == sorted(ticks)


def test_summary_and_comparison_agree(comparison_dir, semantic_run_dir):
    summary = read_summary(RunArtifacts.at(semantic_run_dir).summary)
    row = next(r for r in read_comparison(comparison_dir)
               if r["policy"] == "semantic")
    assert row["qos_satisfaction_rate"] == summary["qos_satisfaction_rate"]
    assert row["sla_violation_count"] == summary["sla_violation_count"]
    assert row["mean_pool_utilization"] == summary["mean_pool_utilization"]


def test_missing_file_is_reported_with_its_path(tmp_path):
    with pytest.raises(MissingArtifact) as info:
        read_comparison(tmp_path)
    assert str(tmp_path / COMPARISON_FILE) in str(info.value)
    with pytest.raises(MissingArtifact):
        load_run(tmp_path)


def test_wrong_header_is_a_schema_mismatch(tmp_path, semantic_run_dir):
    target = tmp_path / "run"
    shutil.copytree(semantic_run_dir, target)
    series = target / SERIES_FILE
    lines = series.read_text().splitlines()
    series.write_text("\n".join(["bogus,columns"] + lines[1:]) + "\n")
    with pytest.raises(SchemaMismatch) as info:
        read_table(series, SERIES_COLUMNS)
    assert "header" in str(info.value)


def test_unparsable_cell_is_a_schema_mismatch(tmp_path, semantic_run_dir):
    target = tmp_path / "run"
    shutil.copytree(semantic_run_dir, target)
    ledger = target / LEDGER_FILE
    lines = ledger.read_text().splitlines()
    first = lines[1].split(",")
    first[3] = "plenty"
    ledger.write_text("\n".join([lines[0], ",".join(first)] + lines[2:]) + "\n")
    with pytest.raises(SchemaMismatch) as info:
        read_table(ledger, LEDGER_COLUMNS)
    assert "line 2" in str(info.value)


def test_series_summary_disagreement_is_rejected(tmp_path, semantic_run_dir):
    target = tmp_path / "run"
    shutil.copytree(semantic_run_dir, target)
    series = target / SERIES_FILE
    lines = series.read_text().splitlines()
    series.write_text("\n".join(lines[:-5]) + "\n")
    with pytest.raises(SchemaMismatch) as info:
        load_run(target)
    assert "declares" in str(info.value)


def test_summary_missing_keys_is_rejected(tmp_path):
    bad = tmp_path / SUMMARY_FILE
    bad.write_text('{"policy": "static"}')
    with pytest.raises(SchemaMismatch) as info:
        read_summary(bad)
    assert "lacks keys" in str(info.value)
