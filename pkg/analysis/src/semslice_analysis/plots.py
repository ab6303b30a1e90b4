"""Batch figure generation from emitted artifacts.

Both plot functions return the exact data structure they drew, so tests
can hold the figures to read-back equality against the source files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from semslice_analysis.artifacts import (  # noqa: E402
    ACTION_COLUMNS,
    LEDGER_COLUMNS,
    POOL_ROW_ID,
    SERIES_COLUMNS,
    RunArtifacts,
    read_comparison,
    read_table,
)
from semslice_analysis.errors import EmptySeries, SchemaMismatch  # noqa: E402

IMAGE_SUFFIXES = (".png", ".svg")

COMPARISON_METRICS = (
    ("qos_satisfaction_rate", "QoS satisfaction rate"),
    ("sla_violation_count", "SLA violations"),
    ("mean_pool_utilization", "Mean pool utilization"),
)


def _check_out_path(out: Path | str) -> Path:
    out = Path(out)
    if out.suffix.lower() not in IMAGE_SUFFIXES:
        raise ValueError(
            f"unsupported image format {out.suffix!r}; use one of "
            f"{', '.join(IMAGE_SUFFIXES)}")
    return out


@dataclass(frozen=True)
class ComparisonData:
    """What the comparison figure shows: one value per policy and metric."""

    policies: tuple[str, ...]
    values: dict[str, tuple[float, ...]]  # metric -> per-policy values


def plot_comparison(comparison_dir: Path | str,
                    out: Path | str) -> ComparisonData:
    """Side-by-side policy bars; every bar is a value read from the table.

    Raises MissingArtifact when comparison.csv is absent and SchemaMismatch
    when it has the wrong header or an unusable number of rows.
    """
    out = _check_out_path(out)
    rows = read_comparison(comparison_dir)
    if not 2 <= len(rows) <= 4:
        raise SchemaMismatch(Path(comparison_dir), f"expected 2-4 policy "
                                                   f"rows, got {len(rows)}")
    policies = tuple(row["policy"] for row in rows)
    data = ComparisonData(
        policies=policies,
        values={metric: tuple(row[metric] for row in rows)
                for metric, _ in COMPARISON_METRICS},
    )

    fig, axes = plt.subplots(1, len(COMPARISON_METRICS),
                             figsize=(4 * len(COMPARISON_METRICS), 4))
    for ax, (metric, title) in zip(axes, COMPARISON_METRICS):
        heights = data.values[metric]
        bars = ax.bar(range(len(policies)), heights,
                      color=plt.cm.tab10.colors[:len(policies)],
                      label=metric)
        ax.set_xticks(range(len(policies)))
        ax.set_xticklabels(policies, rotation=20)
        ax.set_title(title)
        for bar, value in zip(bars, heights):
            ax.annotate(f"{value!r}", (bar.get_x() + bar.get_width() / 2,
                                       bar.get_height()),
                        ha="center", va="bottom", fontsize=7)
    fig.suptitle("Provisioning policy comparison")
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return data


@dataclass(frozen=True)
class TimelineData:
    """What the timeline figure shows for one run."""

    ticks: tuple[int, ...]
    bandwidth_by_slice: dict[str, tuple[float, ...]]  # committed, radio domain
    pool_utilization: tuple[float, ...]
    incident_spans: tuple[tuple[int, int], ...]


def _incident_spans(actions: list[dict], last_tick: int):
    """Shaded phases: each preempt batch opens a span, the next reclaim
    batch (or the end of the run) closes it."""
    starts = sorted({row["tick"] for row in actions
                     if row["reason"] == "INCIDENT_PREEMPT"
                     and row["outcome"] == "ok"})
    ends = sorted({row["tick"] for row in actions
                   if row["reason"] == "NORMALCY_RECLAIM"
                   and row["outcome"] == "ok"})
    spans = []
    for start in starts:
        end = next((e for e in ends if e > start), last_tick)
        spans.append((start, end))
    return tuple(spans)


def plot_timeline(run_dir: Path | str, out: Path | str) -> TimelineData:
    """Per-slice committed radio bandwidth and pool utilization over time,
    with incident phases shaded as read from the action log."""
    out = _check_out_path(out)
    paths = RunArtifacts.at(run_dir)
    series = read_table(paths.series, SERIES_COLUMNS)
    if not series:
        raise EmptySeries(paths.series)
    actions = read_table(paths.actions, ACTION_COLUMNS)
    ledger = read_table(paths.ledger, LEDGER_COLUMNS)

    ticks = tuple(row["tick"] for row in series)
    by_slice: dict[str, dict[int, float]] = {}
    for row in ledger:
        if row["domain"] != "RAN" or row["slice_id"] == POOL_ROW_ID:
            continue
        by_slice.setdefault(row["slice_id"], {})[row["tick"]] = row["committed"]
    data = TimelineData(
        ticks=ticks,
        bandwidth_by_slice={
            sid: tuple(points.get(t, 0.0) for t in ticks)
            for sid, points in sorted(by_slice.items())
        },
        pool_utilization=tuple(row["mean_utilization"] for row in series),
        incident_spans=_incident_spans(actions, ticks[-1]),
    )

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(10, 6))
    for sid, values in data.bandwidth_by_slice.items():
        top.plot(ticks, values, label=sid)
    top.set_ylabel("committed radio bandwidth (Mbps)")
    top.legend(loc="upper right", fontsize=8)
    bottom.plot(ticks, data.pool_utilization, color="black")
    bottom.set_ylabel("mean pool utilization")
    bottom.set_xlabel("tick")
    bottom.set_ylim(bottom=0.0)
    for ax in (top, bottom):
        for start, end in data.incident_spans:
            ax.axvspan(start, end, color="tab:red", alpha=0.15)
    fig.suptitle(f"Run timeline: {Path(run_dir).name}")
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return data
