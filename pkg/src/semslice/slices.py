"""Slice identity, admission signaling and the resource ledger.

The resource pool tracks five infrastructure domains; every reservation is
all-or-nothing and keyed to one slice, so conservation (summed commitments
never exceed capacity) and isolation (no cross-slice mutation) are auditable
by re-summation.  Attachment walks the registration stages in order and
stops at the first failing one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping

from semslice.catalog import (
    DEMAND_FIELDS,
    ResourceDemand,
    ServiceClass,
)
from semslice.errors import CapacityExceeded, ReleaseUnderflow, SlaFloor

DOMAINS = ("RAN", "TN", "EDGE", "CORE", "STORAGE")


@dataclass(frozen=True)
class SNssai:
    """Slice identifier: service type plus optional 24-bit differentiator.

    An entry with ``sd=None`` in an allowed list matches every slice of
    that service type.
    """

    sst: int
    sd: int | None = None

    def __post_init__(self) -> None:
        if self.sst not in (1, 2, 3):
            raise ValueError(f"sst must be 1, 2 or 3: {self.sst}")
        if self.sd is not None and not 0 <= self.sd < 2**24:
            raise ValueError(f"sd must fit in 24 bits: {self.sd}")

    def admits(self, concrete: "SNssai") -> bool:
        return self.sst == concrete.sst and self.sd in (None, concrete.sd)

    def __str__(self) -> str:
        return f"{self.sst}-{'*' if self.sd is None else self.sd}"

    @classmethod
    def parse(cls, token: str) -> "SNssai":
        sst_text, _, sd_text = token.partition("-")
        sd = None if sd_text in ("", "*") else int(sd_text)
        return cls(sst=int(sst_text), sd=sd)


class AttachmentState(enum.Enum):
    IDLE = "IDLE"
    RRC_REQUESTED = "RRC_REQUESTED"
    UDM_QUERIED = "UDM_QUERIED"
    NSSF_SELECTED = "NSSF_SELECTED"
    AUTHENTICATED = "AUTHENTICATED"
    REGISTERED = "REGISTERED"
    REJECTED = "REJECTED"


MAX_ALLOWED_NSSAI = 8


@dataclass(frozen=True)
class UeContext:
    ue_id: str
    allowed_nssai: tuple[SNssai, ...]
    stream_id: str
    attachment_state: AttachmentState = AttachmentState.IDLE
    current_slice: str | None = None

    def __post_init__(self) -> None:
        if len(self.allowed_nssai) > MAX_ALLOWED_NSSAI:
            raise ValueError(
                f"UE {self.ue_id}: at most {MAX_ALLOWED_NSSAI} allowed "
                f"S-NSSAIs, got {len(self.allowed_nssai)}"
            )
        registered = self.attachment_state == AttachmentState.REGISTERED
        if registered != (self.current_slice is not None):
            raise ValueError(
                f"UE {self.ue_id}: current_slice must be set exactly when "
                "REGISTERED"
            )


@dataclass(frozen=True)
class ResourcePool:
    """Per-domain capacities and committed amounts, in DOMAINS order."""

    capacity: tuple[float, float, float, float, float]
    committed: tuple[float, float, float, float, float] = (0.0,) * 5

    @classmethod
    def from_capacities(cls, ran_bandwidth_mbps: float, tn_bandwidth_mbps: float,
                        edge_compute_units: float, core_compute_units: float,
                        storage_gb: float) -> "ResourcePool":
        return cls(capacity=(ran_bandwidth_mbps, tn_bandwidth_mbps,
                             edge_compute_units, core_compute_units, storage_gb))

    def __post_init__(self) -> None:
        for domain, cap, used in zip(DOMAINS, self.capacity, self.committed):
            if cap < 0:
                raise ValueError(f"{domain} capacity must be non-negative")
            if used < -1e-9 or used > cap + 1e-9:
                raise ValueError(f"{domain} committed {used:g} outside [0, {cap:g}]")

    def free(self, domain: str) -> float:
        i = DOMAINS.index(domain)
        return self.capacity[i] - self.committed[i]

    def utilization(self) -> tuple[float, ...]:
        return tuple(
            (used / cap) if cap > 0 else 0.0
            for cap, used in zip(self.capacity, self.committed)
        )

    def apply(self, deltas: Mapping[str, float]) -> "ResourcePool":
        """Commit (or release, for negative deltas) atomically.

        Raises CapacityExceeded naming the first overrun domain in DOMAINS
        order; the pool is unchanged on failure.
        """
        new_committed = list(self.committed)
        for i, domain in enumerate(DOMAINS):
            delta = deltas.get(domain, 0.0)
            value = new_committed[i] + delta
            if value > self.capacity[i] + 1e-9:
                raise CapacityExceeded(domain, requested=delta,
                                       free=self.capacity[i] - self.committed[i])
            new_committed[i] = min(max(value, 0.0), self.capacity[i])
        return replace(self, committed=tuple(new_committed))


@dataclass(frozen=True)
class SliceInstance:
    """One network slice instance with its reservation and SLA floor."""

    slice_id: str
    s_nssai: SNssai
    service_class: ServiceClass
    allocation: ResourceDemand
    sla: ResourceDemand
    attached_ues: frozenset[str] = frozenset()
    isolation_tag: str = ""

    def __post_init__(self) -> None:
        if self.s_nssai.sd is None:
            raise ValueError(f"slice {self.slice_id}: s_nssai must be concrete")
        if not self.isolation_tag:
            object.__setattr__(self, "isolation_tag", f"iso-{self.slice_id}")


def domain_commitments(demand: ResourceDemand,
                       edge_fraction: float) -> dict[str, float]:
    """Map a demand vector onto the five pool domains.

    Bandwidth is reserved in both the radio and transport networks; compute
    splits between edge and core by the class's placement fraction.
    """
    return {
        "RAN": demand.bandwidth_mbps,
        "TN": demand.bandwidth_mbps,
        "EDGE": demand.compute_units * edge_fraction,
        "CORE": demand.compute_units * (1.0 - edge_fraction),
        "STORAGE": demand.storage_gb,
    }


@dataclass(frozen=True)
class DelegationRecord:
    tick: int
    slice_id: str
    domain: str
    subnet: str
    amount: float


class SubnetRegistry:
    """Subnets exported per domain, plus the log of delegated reservations."""

    def __init__(self, subnets: Mapping[str, str] | None = None):
        self.subnets: dict[str, str] = dict(
            subnets if subnets is not None
            else {d: d.lower() + "0" for d in DOMAINS}
        )
        self.delegations: list[DelegationRecord] = []

    def check_registered(self, domains: list[str]) -> None:
        missing = [d for d in domains if d not in self.subnets]
        if missing:
            raise ValueError(f"no registered subnet for domain(s): {missing}")

    def branch(self) -> "SubnetRegistry":
        """Scratch registry for a transaction; merge back with absorb()."""
        return SubnetRegistry(self.subnets)

    def absorb(self, other: "SubnetRegistry") -> None:
        self.delegations.extend(other.delegations)

    def record(self, tick: int, slice_id: str, deltas: Mapping[str, float]) -> None:
        for domain in DOMAINS:
            amount = deltas.get(domain, 0.0)
            if amount != 0.0:
                self.delegations.append(
                    DelegationRecord(tick, slice_id, domain,
                                     self.subnets[domain], amount)
                )


def _check_non_negative(delta: ResourceDemand) -> None:
    for f in DEMAND_FIELDS:
        if getattr(delta, f) < 0:
            raise ValueError(f"delta field {f} must be non-negative")


def allocate(slc: SliceInstance, delta: ResourceDemand, pool: ResourcePool,
             registry: SubnetRegistry, now: int = 0,
             ) -> tuple[SliceInstance, ResourcePool]:
    """Reserve ``delta`` on top of the slice's current allocation.

    Atomic: on CapacityExceeded neither the slice nor the pool changes.
    """
    _check_non_negative(delta)
    deltas = domain_commitments(delta, slc.service_class.edge_fraction)
    registry.check_registered([d for d, v in deltas.items() if v > 0])
    new_pool = pool.apply(deltas)
    new_slice = replace(slc, allocation=slc.allocation.add(delta))
    registry.record(now, slc.slice_id, deltas)
    return new_slice, new_pool


def release(slc: SliceInstance, delta: ResourceDemand, pool: ResourcePool,
            registry: SubnetRegistry | None = None, now: int = 0,
            force: bool = False) -> tuple[SliceInstance, ResourcePool]:
    """Return ``delta`` to the pool.

    Refuses to drop an occupied slice below its SLA floor unless ``force``
    is set (the violation then surfaces through assure_sla).
    """
    _check_non_negative(delta)
    for f in DEMAND_FIELDS:
        if getattr(delta, f) > getattr(slc.allocation, f) + 1e-9:
            raise ReleaseUnderflow(f, getattr(delta, f), getattr(slc.allocation, f))
    new_alloc = slc.allocation.sub(delta).positive_part()
    if slc.attached_ues and not force and not new_alloc.covers(slc.sla):
        raise SlaFloor(slc.slice_id, new_alloc.shortfalls(slc.sla)[0])
    deltas = {d: -v for d, v in
              domain_commitments(delta, slc.service_class.edge_fraction).items()}
    new_pool = pool.apply(deltas)
    if registry is not None:
        registry.record(now, slc.slice_id, deltas)
    return replace(slc, allocation=new_alloc), new_pool


def scale_slice(slc: SliceInstance, target: ResourceDemand, pool: ResourcePool,
                registry: SubnetRegistry, now: int = 0, force: bool = False,
                ) -> tuple[SliceInstance, ResourcePool]:
    """Set the slice allocation to ``target``, all-or-nothing.

    Equivalent to releasing the shrinking fields and allocating the growing
    ones; capacity and SLA checks run before anything is committed.
    """
    _check_non_negative(target)
    if slc.attached_ues and not force and not target.covers(slc.sla):
        raise SlaFloor(slc.slice_id, target.shortfalls(slc.sla)[0])
    old = domain_commitments(slc.allocation, slc.service_class.edge_fraction)
    new = domain_commitments(target, slc.service_class.edge_fraction)
    deltas = {d: new[d] - old[d] for d in DOMAINS}
    registry.check_registered([d for d, v in deltas.items() if v > 0])
    new_pool = pool.apply(deltas)
    registry.record(now, slc.slice_id, deltas)
    return replace(slc, allocation=target), new_pool


@dataclass(frozen=True)
class AttachResult:
    ue: UeContext
    slice: SliceInstance | None
    registered: bool
    reason: str | None
    transitions: tuple[tuple[str, str], ...]


_ATTACH_STAGES = (
    AttachmentState.RRC_REQUESTED,
    AttachmentState.UDM_QUERIED,
    AttachmentState.NSSF_SELECTED,
    AttachmentState.AUTHENTICATED,
    AttachmentState.REGISTERED,
)


def attach(ue: UeContext, requested: SNssai,
           slices: Mapping[str, SliceInstance], pool: ResourcePool,
           inject_auth_failure: bool = False) -> AttachResult:
    """Run the registration signaling for one UE against one S-NSSAI.

    Stage order: radio request, subscriber lookup, slice selection
    (allowance, existence, then admission headroom), authentication,
    registration accept.  The first failure rejects the UE and leaves the
    slice table untouched.
    """
    if ue.attachment_state != AttachmentState.IDLE:
        raise ValueError(f"UE {ue.ue_id} not IDLE: {ue.attachment_state}")

    transitions: list[tuple[str, str]] = []

    def reject(stage: AttachmentState, reason: str) -> AttachResult:
        transitions.append((stage.value, reason))
        rejected = replace(ue, attachment_state=AttachmentState.REJECTED,
                           current_slice=None)
        return AttachResult(rejected, None, False, reason, tuple(transitions))

    transitions.append((AttachmentState.RRC_REQUESTED.value, "ok"))
    transitions.append((AttachmentState.UDM_QUERIED.value, "ok"))

    if not any(entry.admits(requested) for entry in ue.allowed_nssai):
        return reject(AttachmentState.NSSF_SELECTED, "NotAllowed")
    target = None
    for slice_id in sorted(slices):
        if slices[slice_id].s_nssai == requested:
            target = slices[slice_id]
            break
    if target is None:
        return reject(AttachmentState.NSSF_SELECTED, "SliceNotFound")
    if len(target.attached_ues) + 1 > target.allocation.concurrent_ues:
        return reject(AttachmentState.NSSF_SELECTED, "CapacityExceeded")
    transitions.append((AttachmentState.NSSF_SELECTED.value, "ok"))

    if inject_auth_failure:
        return reject(AttachmentState.AUTHENTICATED, "AuthFailure")
    transitions.append((AttachmentState.AUTHENTICATED.value, "ok"))

    transitions.append((AttachmentState.REGISTERED.value, "ok"))
    new_ue = replace(ue, attachment_state=AttachmentState.REGISTERED,
                     current_slice=target.slice_id)
    new_slice = replace(target, attached_ues=target.attached_ues | {ue.ue_id})
    return AttachResult(new_ue, new_slice, True, None, tuple(transitions))


def detach(ue: UeContext, slc: SliceInstance) -> tuple[UeContext, SliceInstance]:
    """Remove a registered UE from its slice; the UE returns to IDLE."""
    if ue.current_slice != slc.slice_id:
        raise ValueError(f"UE {ue.ue_id} is not attached to {slc.slice_id}")
    new_ue = replace(ue, attachment_state=AttachmentState.IDLE, current_slice=None)
    new_slice = replace(slc, attached_ues=slc.attached_ues - {ue.ue_id})
    return new_ue, new_slice


@dataclass(frozen=True)
class SlaViolation:
    tick: int
    slice_id: str
    metric: str


def assure_sla(slices: Mapping[str, SliceInstance], tick: int) -> list[SlaViolation]:
    """One violation record per occupied slice and under-floor metric.

    UE overpopulation beyond the concurrency ceiling reports as metric
    ``scale``.
    """
    violations: list[SlaViolation] = []
    for slice_id in sorted(slices):
        slc = slices[slice_id]
        if slc.attached_ues:
            for metric in slc.allocation.shortfalls(slc.sla):
                violations.append(SlaViolation(tick, slice_id, metric))
        if len(slc.attached_ues) > slc.allocation.concurrent_ues:
            violations.append(SlaViolation(tick, slice_id, "scale"))
    return violations


@dataclass(frozen=True)
class MetricsSample:
    """Per-tick snapshot consumed by report aggregation."""

    tick: int
    domain_utilization: tuple[float, float, float, float, float]
    slice_load: tuple[tuple[str, float], ...]
    violations: int
    admissions_accepted: int
    admissions_denied: int


@dataclass
class ReportFragment:
    """Mergeable aggregate of metrics samples (sums and counts only)."""

    sample_count: int = 0
    domain_util_sum: tuple[float, ...] = (0.0,) * 5
    slice_load_sums: dict[str, tuple[float, int]] = field(default_factory=dict)
    violation_count: int = 0
    admissions_accepted: int = 0
    admissions_denied: int = 0

    def merge(self, other: "ReportFragment") -> "ReportFragment":
        loads = dict(self.slice_load_sums)
        for sid, (total, count) in other.slice_load_sums.items():
            prev_total, prev_count = loads.get(sid, (0.0, 0))
            loads[sid] = (prev_total + total, prev_count + count)
        return ReportFragment(
            sample_count=self.sample_count + other.sample_count,
            domain_util_sum=tuple(
                a + b for a, b in zip(self.domain_util_sum, other.domain_util_sum)
            ),
            slice_load_sums=loads,
            violation_count=self.violation_count + other.violation_count,
            admissions_accepted=self.admissions_accepted + other.admissions_accepted,
            admissions_denied=self.admissions_denied + other.admissions_denied,
        )

    def mean_domain_utilization(self) -> tuple[float, ...]:
        if self.sample_count == 0:
            return (0.0,) * 5
        return tuple(s / self.sample_count for s in self.domain_util_sum)

    def mean_slice_load(self) -> dict[str, float]:
        return {
            sid: (total / count if count else 0.0)
            for sid, (total, count) in sorted(self.slice_load_sums.items())
        }


def aggregate_reports(samples: list[MetricsSample]) -> ReportFragment:
    """Consolidate time-ordered samples; associative under merge."""
    fragment = ReportFragment()
    for sample in samples:
        loads = {sid: (load, 1) for sid, load in sample.slice_load}
        fragment = fragment.merge(
            ReportFragment(
                sample_count=1,
                domain_util_sum=sample.domain_utilization,
                slice_load_sums=loads,
                violation_count=sample.violations,
                admissions_accepted=sample.admissions_accepted,
                admissions_denied=sample.admissions_denied,
            )
        )
    return fragment
