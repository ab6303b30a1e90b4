"""Figures and reports from simulator metric artifacts.

This package never runs a simulation and never recomputes a metric: it
reads the five artifact files one run emits (plus comparison.csv for
side-by-side runs) and renders them.
"""

from semslice_analysis.artifacts import (
    RunArtifacts,
    RunData,
    load_run,
    read_comparison,
    read_summary,
    read_table,
)
from semslice_analysis.errors import (
    AnalysisError,
    EmptySeries,
    MissingArtifact,
    SchemaMismatch,
)
from semslice_analysis.plots import (
    ComparisonData,
    TimelineData,
    plot_comparison,
    plot_timeline,
)
from semslice_analysis.report import run_report

__all__ = [
    "AnalysisError",
    "ComparisonData",
    "EmptySeries",
    "MissingArtifact",
    "RunArtifacts",
    "RunData",
    "SchemaMismatch",
    "TimelineData",
    "load_run",
    "plot_comparison",
    "plot_timeline",
    "read_comparison",
    "read_summary",
    "read_table",
    "run_report",
]
