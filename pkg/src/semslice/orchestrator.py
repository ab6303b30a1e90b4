"""Reasoning-plane orchestration.

Four cooperating steps run once per tick: identify each UE's service class
from its stream's knowledge graph, raise slice-switch requests when the
identified class drifts from the served one, compute per-slice resource
demand through the communication-computation trade-off, and provision
predictively (preempt on incidents, reclaim after a quiet period, track
demand drift otherwise).  Every step is a pure function; the only carried
state is the per-UE semantic record and the small provisioning record
threaded in and out.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Mapping

from semslice.catalog import (
    ADDITIVE_FIELDS,
    QosCalibration,
    ResourceDemand,
    ServiceClass,
    TaskKind,
    aggregate_class,
    keepalive_floor,
    quantify,
    tradeoff_demand,
)
from semslice.errors import CapacityExceeded, ReleaseUnderflow, SlaFloor
from semslice.semantic import Dictionary, KnowledgeGraph, extract_tasks, matching_rules
from semslice.slices import (
    DOMAINS,
    AttachmentState,
    ResourcePool,
    SliceInstance,
    SNssai,
    SubnetRegistry,
    UeContext,
    attach,
    detach,
    domain_commitments,
    scale_slice,
)


@dataclass(frozen=True)
class UeSemanticState:
    """What the orchestrator currently believes about one UE."""

    ue_id: str
    last_tasks: frozenset[TaskKind]
    identified_class: ServiceClass
    served_class: ServiceClass
    rho: float = 1.0


@dataclass(frozen=True)
class SwitchRequest:
    ue_id: str
    from_slice: str | None
    to_class: ServiceClass
    issued_at: int


class ScaleReason(enum.Enum):
    INCIDENT_PREEMPT = "INCIDENT_PREEMPT"
    NORMALCY_RECLAIM = "NORMALCY_RECLAIM"
    DEMAND_TRACKING = "DEMAND_TRACKING"


@dataclass(frozen=True)
class ScaleAction:
    slice_id: str
    target: ResourceDemand
    reason: ScaleReason
    issued_at: int


@dataclass(frozen=True)
class ProvisioningParams:
    """Knobs for the predictive provisioning step."""

    preempt_factor: float = 2.0
    hysteresis_ticks: int = 10
    drift_tolerance: float = 0.10

    def __post_init__(self) -> None:
        if self.preempt_factor < 1.0:
            raise ValueError("preempt_factor must be >= 1")
        if self.hysteresis_ticks < 0:
            raise ValueError("hysteresis_ticks must be >= 0")
        if not 0.0 <= self.drift_tolerance < 1.0:
            raise ValueError("drift_tolerance must be in [0, 1)")


@dataclass(frozen=True)
class ProvisioningState:
    """Carried between provisioning steps.

    ``preempt_floors`` pins the boosted allocation of each preempted slice
    so routine demand tracking cannot quietly undo a preemption before the
    reclaim step runs.
    """

    incident_active: bool = False
    cleared_at: int | None = None
    preempt_floors: tuple[tuple[str, ResourceDemand], ...] = ()

    def floor_of(self, slice_id: str) -> ResourceDemand | None:
        for sid, floor in self.preempt_floors:
            if sid == slice_id:
                return floor
        return None


def identify_service_class(state: UeSemanticState, kg: KnowledgeGraph,
                           dictionary: Dictionary, now: int) -> UeSemanticState:
    """Re-derive the UE's tasks and service class from its stream's graph."""
    tasks = extract_tasks(kg, dictionary, now)
    return replace(state, last_tasks=frozenset(tasks),
                   identified_class=aggregate_class(tasks))


def check_slice_switch(state: UeSemanticState, current_slice: str | None,
                       now: int, pending: SwitchRequest | None = None,
                       ) -> SwitchRequest | None:
    """Return the request that should be outstanding for this UE, if any.

    A mismatch between identified and served class raises a request; while
    one is already pending for the same target class it is kept rather than
    re-issued, and it is dropped once the mismatch disappears.
    """
    if state.identified_class.id == state.served_class.id:
        return None
    if pending is not None and pending.to_class.id == state.identified_class.id:
        return pending
    return SwitchRequest(ue_id=state.ue_id, from_slice=current_slice,
                         to_class=state.identified_class, issued_at=now)


def compute_slice_demand(slc: SliceInstance,
                         ue_states: Mapping[str, UeSemanticState],
                         cal: QosCalibration) -> ResourceDemand:
    """Resource vector the slice needs for its current members.

    Quantifies the slice class for the member count, then applies the
    communication-computation trade-off at the most aggressive (smallest)
    compression ratio any member runs.  An empty slice needs only the
    keep-alive floor.
    """
    members = sorted(slc.attached_ues)
    if not members:
        return keepalive_floor(cal)
    rho = min((ue_states[u].rho for u in members if u in ue_states), default=1.0)
    base = quantify(slc.service_class.qos, cal, len(members))
    return tradeoff_demand(base, rho, cal.kappa)


def _occupied_target(slc: SliceInstance, demand: ResourceDemand) -> ResourceDemand:
    if slc.attached_ues:
        return demand.strongest(slc.sla)
    return demand


def slice_target(slc: SliceInstance, ue_states: Mapping[str, UeSemanticState],
                 cal: QosCalibration) -> ResourceDemand:
    """Computed demand, floored at the SLA while the slice is occupied."""
    return _occupied_target(slc, compute_slice_demand(slc, ue_states, cal))


@dataclass(frozen=True)
class SwitchOutcome:
    """Result of deciding one switch request; denial is a value."""

    accepted: bool
    reason: str | None
    to_slice: str | None
    created_slice: str | None
    ue: UeContext
    slices: Mapping[str, SliceInstance]
    pool: ResourcePool
    scale_log: tuple[tuple[str, ResourceDemand, ResourceDemand], ...] = ()
    transitions: tuple[tuple[str, str], ...] = ()


def _next_dynamic_id(slices: Mapping[str, SliceInstance], sst: int) -> SNssai:
    used = {s.s_nssai.sd for s in slices.values() if s.s_nssai.sst == sst}
    sd = 0
    while sd in used:
        sd += 1
    return SNssai(sst=sst, sd=sd)


def decide_switch(req: SwitchRequest, ue: UeContext,
                  ue_states: Mapping[str, UeSemanticState],
                  slices: Mapping[str, SliceInstance], pool: ResourcePool,
                  registry: SubnetRegistry, cal: QosCalibration,
                  now: int) -> SwitchOutcome:
    """Accept or deny a slice switch, executing it atomically on accept.

    Ordering is release-before-admit: the old slice shrinks to what its
    remaining members need, the target slice (instantiated from the class
    if absent) grows to fit one more member, and only then does the UE
    attach.  Any capacity or floor failure denies the request and leaves
    every input value unchanged.
    """
    def deny(reason: str) -> SwitchOutcome:
        return SwitchOutcome(False, reason, None, None, ue, slices, pool)

    to_class = req.to_class
    target_id = None
    for sid in sorted(slices):
        if slices[sid].service_class.id == to_class.id:
            target_id = sid
            break

    work = dict(slices)
    wpool = pool
    scratch = registry.branch()
    created: str | None = None
    floor = keepalive_floor(cal)
    scale_log: list[tuple[str, ResourceDemand, ResourceDemand]] = []

    try:
        if target_id is None:
            s_nssai = _next_dynamic_id(slices, to_class.sst_hint.value)
            target_id = f"dyn-{s_nssai.sst}-{s_nssai.sd:03d}"
            fresh = SliceInstance(slice_id=target_id, s_nssai=s_nssai,
                                  service_class=to_class,
                                  allocation=ResourceDemand.zero(), sla=floor)
            fresh, wpool = scale_slice(fresh, floor, wpool, scratch, now)
            scale_log.append((target_id, ResourceDemand.zero(), floor))
            work[target_id] = fresh
            created = target_id

        if not any(entry.admits(work[target_id].s_nssai)
                   for entry in ue.allowed_nssai):
            return deny("NotAllowed")

        if ue.current_slice is not None:
            old = work[ue.current_slice]
            moved, old = detach(ue, old)
            remaining = _occupied_target(old, compute_slice_demand(old, ue_states, cal))
            before = old.allocation
            old, wpool = scale_slice(old, remaining, wpool, scratch, now)
            scale_log.append((old.slice_id, before, remaining))
            work[old.slice_id] = old
        else:
            moved = ue
            if moved.attachment_state != AttachmentState.IDLE:
                moved = replace(moved, attachment_state=AttachmentState.IDLE,
                                current_slice=None)

        target = work[target_id]
        joined = replace(target, attached_ues=target.attached_ues | {ue.ue_id})
        grown = _occupied_target(joined, compute_slice_demand(joined, ue_states, cal))
        before = target.allocation
        target, wpool = scale_slice(target, grown, wpool, scratch, now)
        scale_log.append((target_id, before, grown))
        work[target_id] = target

        result = attach(moved, target.s_nssai, work, wpool)
        if not result.registered:
            return deny(result.reason or "Rejected")
        work[target_id] = result.slice
    except (CapacityExceeded, SlaFloor, ReleaseUnderflow) as err:
        detail = getattr(err, "domain", None) or getattr(err, "metric", None) \
            or getattr(err, "field", None)
        return deny(f"{type(err).__name__}: {detail}" if detail else type(err).__name__)

    registry.absorb(scratch)
    return SwitchOutcome(True, None, target_id, created, result.ue, work,
                         wpool, tuple(scale_log), result.transitions)


def _feasible_factor(slc: SliceInstance, pool: ResourcePool,
                     limit: float) -> float:
    """Largest uniform scale-up of the slice's additive fields the pool
    can absorb, capped at ``limit``."""
    held = domain_commitments(slc.allocation, slc.service_class.edge_fraction)
    factor = limit
    for i, domain in enumerate(DOMAINS):
        commit = held[domain]
        if commit <= 0:
            continue
        free = pool.capacity[i] - pool.committed[i]
        factor = min(factor, 1.0 + free / commit)
    return max(factor, 1.0)


def demand_drifted(current: ResourceDemand, desired: ResourceDemand,
                   tolerance: float) -> bool:
    """True when any additive field moved more than ``tolerance`` relative
    to the current value (any growth from zero counts)."""
    for field_name in ADDITIVE_FIELDS:
        have = getattr(current, field_name)
        want = getattr(desired, field_name)
        if have == 0:
            if want > 0:
                return True
        elif abs(want - have) / have > tolerance + 1e-12:
            return True
    return False


def provisioning_step(global_kg: KnowledgeGraph, dictionary: Dictionary,
                      slices: Mapping[str, SliceInstance],
                      ue_states: Mapping[str, UeSemanticState],
                      pool: ResourcePool, cal: QosCalibration,
                      params: ProvisioningParams, state: ProvisioningState,
                      now: int) -> tuple[list[ScaleAction], ProvisioningState]:
    """Predictive provisioning for one tick.

    Incident onset (a critical rule starts matching the global graph)
    preempts every low-latency slice up to ``preempt_factor``, capped by
    pool headroom, and pins those levels as floors.  Once the incident has
    stayed clear for ``hysteresis_ticks``, allocations are reclaimed back
    to computed demand.  Outside those edges, slices whose demand drifted
    beyond ``drift_tolerance`` get tracking actions.  At most one action
    per slice per call; emission order is ascending slice id.
    """
    incident = any(rule.critical
                   for rule in matching_rules(global_kg, dictionary, now))

    actions: list[ScaleAction] = []
    acted: set[str] = set()
    new_state = state

    if incident and not state.incident_active:
        wpool = pool
        floors: list[tuple[str, ResourceDemand]] = []
        for sid in sorted(slices):
            slc = slices[sid]
            if slc.s_nssai.sst != 2:
                continue
            factor = _feasible_factor(slc, wpool, params.preempt_factor)
            target = slc.allocation.scaled_additive(factor)
            actions.append(ScaleAction(sid, target, ScaleReason.INCIDENT_PREEMPT, now))
            acted.add(sid)
            floors.append((sid, target))
            old = domain_commitments(slc.allocation, slc.service_class.edge_fraction)
            new = domain_commitments(target, slc.service_class.edge_fraction)
            wpool = wpool.apply({d: new[d] - old[d] for d in new})
        new_state = ProvisioningState(incident_active=True, cleared_at=None,
                                      preempt_floors=tuple(floors))
    elif incident:
        new_state = replace(state, incident_active=True, cleared_at=None)
    else:
        cleared_at = now if state.incident_active else state.cleared_at
        new_state = replace(state, incident_active=False, cleared_at=cleared_at)
        if cleared_at is not None and now >= cleared_at + params.hysteresis_ticks:
            for sid, _floor in sorted(new_state.preempt_floors):
                if sid not in slices:
                    continue
                slc = slices[sid]
                target = _occupied_target(slc, compute_slice_demand(slc, ue_states, cal))
                actions.append(ScaleAction(sid, target, ScaleReason.NORMALCY_RECLAIM, now))
                acted.add(sid)
            new_state = ProvisioningState(incident_active=False, cleared_at=None,
                                          preempt_floors=())

    for sid in sorted(slices):
        if sid in acted:
            continue
        slc = slices[sid]
        desired = slice_target(slc, ue_states, cal)
        floor = new_state.floor_of(sid)
        if floor is not None:
            desired = desired.strongest(floor)
        if demand_drifted(slc.allocation, desired, params.drift_tolerance):
            actions.append(ScaleAction(sid, desired, ScaleReason.DEMAND_TRACKING, now))

    actions.sort(key=lambda a: a.slice_id)
    return actions, new_state
