"""Comparison provisioning policies.

Three reference policies run behind the same step interface as the
semantic orchestrator: fixed allocations declared up front, reactive
threshold auto-scaling on measured utilization, and a static mapping from
user context rows to service classes.  None of them reads the knowledge
graph; that blindness is part of their contract.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from semslice.catalog import QosCalibration, ResourceDemand, ServiceClass
from semslice.errors import MissingContext
from semslice.orchestrator import (
    ScaleAction,
    ScaleReason,
    SwitchRequest,
    UeSemanticState,
    demand_drifted,
    slice_target,
)
from semslice.slices import DOMAINS, ResourcePool, SliceInstance, domain_commitments


class PolicyKind(enum.Enum):
    STATIC = "static"
    DNS = "dns"
    CONTEXT_AWARE = "context"
    SEMANTIC = "semantic"

    @classmethod
    def parse(cls, token: str) -> "PolicyKind":
        for kind in cls:
            if kind.value == token:
                return kind
        raise ValueError(f"unknown policy: {token!r}")


class Mobility(enum.Enum):
    STATIONARY = "STATIONARY"
    MOBILE = "MOBILE"


class Availability(enum.Enum):
    BUSY = "BUSY"
    AVAILABLE = "AVAILABLE"


@dataclass(frozen=True)
class UserContext:
    """Non-semantic situational facts about a UE."""

    ue_id: str
    location_zone: str
    mobility: Mobility = Mobility.STATIONARY
    availability: Availability = Availability.AVAILABLE


def initial_allocation_actions(nst_targets: Mapping[str, ResourceDemand],
                               now: int = 0) -> list[ScaleAction]:
    """Bootstrap actions giving each declared slice its template allocation."""
    return [ScaleAction(sid, nst_targets[sid], ScaleReason.DEMAND_TRACKING, now)
            for sid in sorted(nst_targets)]


def static_policy_step(nst_targets: Mapping[str, ResourceDemand],
                       now: int) -> list[ScaleAction]:
    """Fixed provisioning: allocate the declared amounts once, then never act."""
    if now == 0:
        return initial_allocation_actions(nst_targets, now)
    return []


@dataclass(frozen=True)
class DnsParams:
    """Thresholds for reactive auto-scaling."""

    window: int = 5
    high_watermark: float = 0.8
    low_watermark: float = 0.3
    step: float = 0.25

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not 0.0 <= self.low_watermark < self.high_watermark <= 1.0:
            raise ValueError("need 0 <= low_watermark < high_watermark <= 1")
        if not 0.0 < self.step <= 1.0:
            raise ValueError("step must be in (0, 1]")


def _capacity_cap(slc: SliceInstance, pool: ResourcePool) -> float:
    """Largest scale factor keeping this slice's own commitments within
    total pool capacity (other slices' holdings are not consulted)."""
    held = domain_commitments(slc.allocation, slc.service_class.edge_fraction)
    cap = float("inf")
    for i, domain in enumerate(DOMAINS):
        if held[domain] > 0:
            cap = min(cap, pool.capacity[i] / held[domain])
    return cap


def dns_policy_step(slices: Mapping[str, SliceInstance], pool: ResourcePool,
                    utilization_history: Mapping[str, Sequence[float]],
                    params: DnsParams, now: int) -> list[ScaleAction]:
    """Threshold auto-scaling on windowed mean utilization.

    Above the high watermark the slice grows by ``step``; below the low
    watermark it shrinks by ``step``.  Requests are pre-clamped to total
    pool capacity and to the slice's SLA floor, but may still be dropped
    by the ledger if other slices hold the headroom.
    """
    actions: list[ScaleAction] = []
    for sid in sorted(slices):
        slc = slices[sid]
        samples = utilization_history.get(sid, ())
        if len(samples) < params.window:
            continue
        mean = sum(samples[-params.window:]) / params.window
        if mean > params.high_watermark:
            factor = min(1.0 + params.step, _capacity_cap(slc, pool))
            target = slc.allocation.scaled_additive(factor)
        elif mean < params.low_watermark:
            target = slc.allocation.scaled_additive(1.0 - params.step)
            target = target.strongest(slc.sla)
        else:
            continue
        if target != slc.allocation:
            actions.append(ScaleAction(sid, target, ScaleReason.DEMAND_TRACKING, now))
    return actions


@dataclass(frozen=True)
class ContextTable:
    """Scenario-declared mapping from context rows to service classes."""

    default_class: ServiceClass
    mobile_class: ServiceClass
    critical_class: ServiceClass
    critical_zones: frozenset[str] = frozenset()

    def class_for(self, ctx: UserContext) -> ServiceClass:
        if ctx.location_zone in self.critical_zones:
            return self.critical_class
        if ctx.mobility is Mobility.MOBILE:
            return self.mobile_class
        return self.default_class


def context_policy_step(contexts: Mapping[str, UserContext],
                        table: ContextTable,
                        ue_states: Mapping[str, UeSemanticState],
                        current_slices: Mapping[str, str | None],
                        slices: Mapping[str, SliceInstance],
                        pending: Mapping[str, SwitchRequest],
                        cal: QosCalibration, params_tolerance: float,
                        now: int) -> tuple[list[SwitchRequest], list[ScaleAction]]:
    """Provision from context rows alone.

    Each UE maps through the table to a class; a mismatch with the served
    class raises a switch request (with the same one-outstanding debounce
    as the semantic policy).  Slice sizes then track member counts.
    Raises MissingContext for a registered UE without a context row.
    """
    requests: list[SwitchRequest] = []
    for ue_id in sorted(ue_states):
        state = ue_states[ue_id]
        ctx = contexts.get(ue_id)
        if ctx is None:
            if current_slices.get(ue_id) is not None:
                raise MissingContext(ue_id)
            continue
        mapped = table.class_for(ctx)
        if mapped.id == state.served_class.id:
            continue
        outstanding = pending.get(ue_id)
        if outstanding is not None and outstanding.to_class.id == mapped.id:
            requests.append(outstanding)
            continue
        requests.append(SwitchRequest(ue_id=ue_id,
                                      from_slice=current_slices.get(ue_id),
                                      to_class=mapped, issued_at=now))

    actions: list[ScaleAction] = []
    for sid in sorted(slices):
        slc = slices[sid]
        desired = slice_target(slc, ue_states, cal)
        if demand_drifted(slc.allocation, desired, params_tolerance):
            actions.append(ScaleAction(sid, desired, ScaleReason.DEMAND_TRACKING, now))
    return requests, actions
