"""Plain-text run report assembled from parsed artifacts."""

from __future__ import annotations

from pathlib import Path

from semslice_analysis.artifacts import load_run


def run_report(run_dir: Path | str) -> str:
    """A short human-readable digest of one run, values read verbatim."""
    data = load_run(run_dir)
    s = data.summary
    lines = [
        f"run: {Path(run_dir).name}",
        f"policy: {s['policy']}",
        f"duration: {s['duration_ticks']} ticks, {s['ue_count']} UEs",
        f"qos satisfaction rate: {s['qos_satisfaction_rate']}",
        f"sla violations: {s['sla_violation_count']}",
        f"mean pool utilization: {s['mean_pool_utilization']}",
        (f"switches: {s['switch_requested']} requested, "
         f"{s['switch_accepted']} accepted, {s['switch_denied']} denied"),
        f"admission denials: {s['admission_denials']}",
        f"dropped actions: {s['dropped_actions']}",
        "actions: " + ", ".join(f"{k}={v}"
                                for k, v in sorted(s["action_counts"].items())),
    ]
    preempts = sorted({row["tick"] for row in data.actions
                       if row["reason"] == "INCIDENT_PREEMPT"
                       and row["outcome"] == "ok"})
    if preempts:
        lines.append("preempt batches at ticks: "
                     + ", ".join(str(t) for t in preempts))
    return "\n".join(lines) + "\n"
