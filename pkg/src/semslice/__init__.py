"""Semantic network-slicing simulator.

Event streams feed per-UE knowledge graphs; extraction rules turn live
facts into computational tasks, tasks aggregate into service classes, and
classes quantify into multi-domain resource demands.  A deterministic
tick engine provisions a shared pool under four policies (static,
threshold auto-scaling, context table, semantic) and emits comparable
metrics artifacts.
"""

from semslice.baselines import PolicyKind
from semslice.engine import (
    GeneratorParams,
    MetricsReport,
    SCENARIO_SCHEMA,
    Scenario,
    emit_comparison,
    emit_metrics,
    generate_first_responder,
    load_scenario,
    run,
    scenario_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "GeneratorParams",
    "MetricsReport",
    "PolicyKind",
    "SCENARIO_SCHEMA",
    "Scenario",
    "emit_comparison",
    "emit_metrics",
    "generate_first_responder",
    "load_scenario",
    "run",
    "scenario_to_json",
    "__version__",
]
