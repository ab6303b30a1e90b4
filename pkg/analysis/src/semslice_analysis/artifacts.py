"""Readers for the simulator's emitted artifact files.

Every number this package plots or prints comes out of these readers;
nothing is recomputed from scratch.  Each reader validates the file
header against the documented layout and converts cell text to the
declared column type, leaving values otherwise untouched.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from semslice_analysis.errors import EmptySeries, MissingArtifact, SchemaMismatch

SUMMARY_FILE = "metrics_summary.json"
SERIES_FILE = "metrics_series.csv"
EVENT_FILE = "event_log.csv"
ACTION_FILE = "action_log.csv"
LEDGER_FILE = "ledger_log.csv"
COMPARISON_FILE = "comparison.csv"

POOL_ROW_ID = "POOL"

SERIES_COLUMNS = (
    "tick", "registered_ues", "satisfied_ues", "qos_satisfaction_rate",
    "sla_violations", "switch_requests", "switch_accepts", "switch_denials",
    "admission_denials", "actions_preempt", "actions_reclaim",
    "actions_tracking", "dropped_actions", "util_ran", "util_tn",
    "util_edge", "util_core", "util_storage", "mean_utilization",
)
EVENT_COLUMNS = ("tick", "ue_id", "stage", "outcome")
ACTION_COLUMNS = ("tick", "kind", "ue_or_slice", "from", "to", "reason",
                  "outcome")
LEDGER_COLUMNS = ("tick", "slice_id", "domain", "committed", "capacity")
COMPARISON_COLUMNS = (
    "policy", "qos_satisfaction_rate", "sla_violation_count",
    "mean_pool_utilization", "util_ran", "util_tn", "util_edge", "util_core",
    "util_storage", "switch_requested", "switch_accepted", "switch_denied",
    "mean_switch_latency", "admission_denials", "preempt_actions",
    "reclaim_actions", "tracking_actions", "dropped_actions",
)

_INT_COLUMNS = frozenset({
    "tick", "registered_ues", "satisfied_ues", "sla_violations",
    "switch_requests", "switch_accepts", "switch_denials",
    "admission_denials", "actions_preempt", "actions_reclaim",
    "actions_tracking", "dropped_actions", "sla_violation_count",
    "switch_requested", "switch_accepted", "switch_denied",
    "preempt_actions", "reclaim_actions", "tracking_actions",
})
_FLOAT_COLUMNS = frozenset({
    "qos_satisfaction_rate", "util_ran", "util_tn", "util_edge", "util_core",
    "util_storage", "mean_utilization", "mean_pool_utilization",
    "mean_switch_latency", "committed", "capacity",
})

SUMMARY_KEYS = frozenset({
    "policy", "duration_ticks", "ue_count", "qos_satisfaction_rate",
    "sla_violation_count", "mean_utilization", "mean_pool_utilization",
    "switch_requested", "switch_accepted", "switch_denied",
    "mean_switch_latency", "admission_denials", "action_counts",
    "dropped_actions",
})


def _convert(column: str, text: str):
    if column in _INT_COLUMNS:
        return int(text)
    if column in _FLOAT_COLUMNS:
        return float(text)
    return text


def read_table(path: Path | str, columns: tuple[str, ...]) -> list[dict]:
    """One CSV artifact as typed row dicts, header checked exactly."""
    path = Path(path)
    if not path.is_file():
        raise MissingArtifact(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaMismatch(path, "file is empty, expected a header row")
    if tuple(rows[0]) != columns:
        raise SchemaMismatch(
            path, f"header {rows[0]!r} does not match {list(columns)!r}")
    out = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(columns):
            raise SchemaMismatch(path, f"line {i}: expected "
                                       f"{len(columns)} cells, got {len(row)}")
        try:
            out.append({c: _convert(c, cell) for c, cell in zip(columns, row)})
        except ValueError as err:
            raise SchemaMismatch(path, f"line {i}: {err}") from err
    return out


def read_summary(path: Path | str) -> dict:
    path = Path(path)
    if not path.is_file():
        raise MissingArtifact(path)
    try:
        summary = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise SchemaMismatch(path, f"not valid JSON: {err}") from err
    if not isinstance(summary, dict) or not SUMMARY_KEYS <= summary.keys():
        missing = sorted(SUMMARY_KEYS - set(summary))
        raise SchemaMismatch(path, f"summary lacks keys: {missing}")
    return summary


def read_comparison(comparison_dir: Path | str) -> list[dict]:
    """Rows of a comparison directory's side-by-side policy table."""
    return read_table(Path(comparison_dir) / COMPARISON_FILE,
                      COMPARISON_COLUMNS)


@dataclass(frozen=True)
class RunArtifacts:
    """The five files one simulation run emits."""

    summary: Path
    series: Path
    events: Path
    actions: Path
    ledger: Path

    @classmethod
    def at(cls, run_dir: Path | str) -> "RunArtifacts":
        run_dir = Path(run_dir)
        return cls(
            summary=run_dir / SUMMARY_FILE,
            series=run_dir / SERIES_FILE,
            events=run_dir / EVENT_FILE,
            actions=run_dir / ACTION_FILE,
            ledger=run_dir / LEDGER_FILE,
        )

    def require(self) -> None:
        for path in (self.summary, self.series, self.events, self.actions,
                     self.ledger):
            if not path.is_file():
                raise MissingArtifact(path)


@dataclass(frozen=True)
class RunData:
    """Fully parsed artifacts of one run."""

    summary: dict
    series: list[dict]
    events: list[dict]
    actions: list[dict]
    ledger: list[dict]


def load_run(run_dir: Path | str) -> RunData:
    """Parse one run directory and check that the pieces agree."""
    paths = RunArtifacts.at(run_dir)
    paths.require()
    data = RunData(
        summary=read_summary(paths.summary),
        series=read_table(paths.series, SERIES_COLUMNS),
        events=read_table(paths.events, EVENT_COLUMNS),
        actions=read_table(paths.actions, ACTION_COLUMNS),
        ledger=read_table(paths.ledger, LEDGER_COLUMNS),
    )
    duration = data.summary["duration_ticks"]
    if len(data.series) != duration:
        raise SchemaMismatch(
            paths.series,
            f"{len(data.series)} series rows but the summary declares "
            f"{duration} ticks")
    return data
