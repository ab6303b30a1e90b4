"""Service-class catalog: task QoS profiles and their quantified resource demands.

Maps each computational task to a seven-metric ordinal QoS vector, aggregates
task sets into a service class, and turns ordinal levels into concrete
quantities (Mbit/s, ms, compute units, ...) via a calibration table.  The
compression trade-off converts bandwidth savings into extra encode compute.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, replace

from semslice.errors import InvalidRho


class TaskKind(enum.Enum):
    """The closed set of computational tasks the rulebook can emit."""

    CONTINUOUS_MONITORING = "ContinuousMonitoring"
    OBJECT_DETECTION = "ObjectDetection"
    EVENT_DETECTION = "EventDetection"
    ALERT_NOTIFICATION = "AlertNotification"
    TRACKING_OBJECT_OF_INTEREST = "TrackingObjectOfInterest"
    TELE_HEALTH = "TeleHealth"
    REMOTE_CONTROL = "RemoteControl"
    PUSH_TO_TALK = "PushToTalk"
    SMART_AMBULANCE = "SmartAmbulance"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, token: str) -> "TaskKind":
        for member in cls:
            if member.value == token:
                return member
        raise ValueError(f"unknown task kind: {token!r}")


class QosLevel(enum.IntEnum):
    """Ordinal QoS level; higher means more demanding."""

    LOW = 0
    AVG = 1
    HIGH = 2

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, token: str) -> "QosLevel":
        try:
            return cls[token]
        except KeyError:
            raise ValueError(f"unknown QoS level: {token!r}") from None


QOS_METRICS = (
    "bandwidth",
    "delay_sensitivity",
    "reliability",
    "scale",
    "compute",
    "storage",
    "mobility",
)


@dataclass(frozen=True, order=False)
class QosVector:
    """Seven ordinal QoS metrics describing one service class."""

    bandwidth: QosLevel
    delay_sensitivity: QosLevel
    reliability: QosLevel
    scale: QosLevel
    compute: QosLevel
    storage: QosLevel
    mobility: QosLevel

    def levels(self) -> tuple[QosLevel, ...]:
        return tuple(getattr(self, m) for m in QOS_METRICS)

    def dominates(self, other: "QosVector") -> bool:
        """Componentwise >= (partial order)."""
        return all(a >= b for a, b in zip(self.levels(), other.levels()))

    def join(self, other: "QosVector") -> "QosVector":
        """Componentwise maximum."""
        merged = {m: max(getattr(self, m), getattr(other, m)) for m in QOS_METRICS}
        return QosVector(**merged)

    @classmethod
    def uniform(cls, level: QosLevel) -> "QosVector":
        return cls(*([level] * len(QOS_METRICS)))

    def tokens(self) -> dict[str, str]:
        return {m: str(getattr(self, m)) for m in QOS_METRICS}

    @classmethod
    def from_tokens(cls, tokens: dict[str, str]) -> "QosVector":
        return cls(**{m: QosLevel.parse(tokens[m]) for m in QOS_METRICS})


class Sst(enum.IntEnum):
    """Standardized slice/service types."""

    EMBB = 1
    URLLC = 2
    MMTC = 3

    def __str__(self) -> str:
        return self.name


# One row per task: bandwidth, delay sensitivity, reliability, scale,
# compute, storage, mobility.
_L, _A, _H = QosLevel.LOW, QosLevel.AVG, QosLevel.HIGH
TASK_QOS_TABLE: dict[TaskKind, QosVector] = {
    TaskKind.CONTINUOUS_MONITORING:       QosVector(_H, _L, _A, _A, _A, _H, _L),
    TaskKind.OBJECT_DETECTION:            QosVector(_A, _A, _A, _A, _H, _H, _L),
    TaskKind.EVENT_DETECTION:             QosVector(_A, _H, _A, _A, _H, _A, _L),
    TaskKind.ALERT_NOTIFICATION:          QosVector(_L, _H, _H, _H, _L, _L, _L),
    TaskKind.TRACKING_OBJECT_OF_INTEREST: QosVector(_L, _A, _A, _A, _H, _H, _L),
    TaskKind.TELE_HEALTH:                 QosVector(_H, _H, _H, _A, _A, _H, _L),
    TaskKind.REMOTE_CONTROL:              QosVector(_H, _H, _H, _L, _A, _L, _L),
    TaskKind.PUSH_TO_TALK:                QosVector(_L, _A, _A, _H, _L, _L, _H),
    TaskKind.SMART_AMBULANCE:             QosVector(_H, _A, _A, _A, _H, _H, _H),
}

# Tasks whose compute demand is served at the network edge rather than the
# core (detection-style workloads).
EDGE_TASKS = frozenset(
    {
        TaskKind.CONTINUOUS_MONITORING,
        TaskKind.OBJECT_DETECTION,
        TaskKind.EVENT_DETECTION,
        TaskKind.TRACKING_OBJECT_OF_INTEREST,
    }
)


def qos_of(task: TaskKind) -> QosVector:
    """QoS profile of a single task (total over TaskKind)."""
    return TASK_QOS_TABLE[task]


def sst_hint_for(qos: QosVector) -> Sst:
    """Decide the slice/service type a QoS vector maps to.

    URLLC when both delay sensitivity and reliability are HIGH; otherwise
    MMTC when scale is HIGH with LOW bandwidth; everything else is EMBB.
    """
    if qos.delay_sensitivity == QosLevel.HIGH and qos.reliability == QosLevel.HIGH:
        return Sst.URLLC
    if qos.scale == QosLevel.HIGH and qos.bandwidth == QosLevel.LOW:
        return Sst.MMTC
    return Sst.EMBB


@dataclass(frozen=True)
class ServiceClass:
    """A catalog entry: QoS vector plus slice-type hint and compute placement.

    ``edge_fraction`` is the share of compute delegated to edge subnets
    (the rest goes to the core); it defaults from the task mix when the
    class is built by :func:`aggregate_class`.
    """

    id: str
    qos: QosVector
    sst_hint: Sst
    edge_fraction: float = 0.0


def _class_id(qos: QosVector, edge_fraction: float) -> str:
    payload = "|".join(str(level.value) for level in qos.levels())
    payload += f"|e={edge_fraction:.6f}"
    return "C" + hashlib.sha256(payload.encode()).hexdigest()[:10]


def make_class(qos: QosVector, edge_fraction: float = 0.0) -> ServiceClass:
    return ServiceClass(
        id=_class_id(qos, edge_fraction),
        qos=qos,
        sst_hint=sst_hint_for(qos),
        edge_fraction=edge_fraction,
    )


#: Class served to a UE whose stream currently implies no task at all.
DEFAULT_CLASS = make_class(QosVector.uniform(QosLevel.LOW), edge_fraction=0.0)


def aggregate_class(tasks: frozenset[TaskKind] | set[TaskKind]) -> ServiceClass:
    """Collapse a task set into one service class.

    The class QoS is the componentwise maximum over the member tasks (a
    slice must satisfy its most demanding concurrent task); the empty set
    maps to :data:`DEFAULT_CLASS`.
    """
    if not tasks:
        return DEFAULT_CLASS
    qos = QosVector.uniform(QosLevel.LOW)
    for task in tasks:
        qos = qos.join(qos_of(task))
    edge_fraction = len(EDGE_TASKS & set(tasks)) / len(tasks)
    return make_class(qos, edge_fraction)


@dataclass(frozen=True)
class QosCalibration:
    """Per-metric lookup from ordinal level to a concrete quantity.

    Each table maps (LOW, AVG, HIGH) in that order.  All tables are strictly
    monotone in demand: higher levels yield larger quantities, except the
    delay budget which shrinks.  ``kappa`` is the encode-compute coefficient
    of the compression trade-off.
    """

    bandwidth_mbps: tuple[float, float, float] = (1.0, 10.0, 50.0)
    delay_budget_ms: tuple[float, float, float] = (200.0, 50.0, 10.0)
    reliability_prob: tuple[float, float, float] = (0.99, 0.999, 0.99999)
    scale_ues: tuple[float, float, float] = (10.0, 100.0, 1000.0)
    compute_units: tuple[float, float, float] = (1.0, 4.0, 16.0)
    storage_gb: tuple[float, float, float] = (1.0, 10.0, 100.0)
    handover_per_min: tuple[float, float, float] = (0.0, 1.0, 10.0)
    kappa: float = 1.0

    def __post_init__(self) -> None:
        for name in ("bandwidth_mbps", "scale_ues", "compute_units",
                     "storage_gb", "handover_per_min"):
            lo, avg, hi = getattr(self, name)
            if not lo <= avg <= hi or not (lo < hi):
                raise ValueError(f"calibration {name} must grow with level")
        lo, avg, hi = self.delay_budget_ms
        if not lo >= avg >= hi or not (lo > hi):
            raise ValueError("calibration delay_budget_ms must shrink with level")
        lo, avg, hi = self.reliability_prob
        if not 0 <= lo <= avg <= hi < 1:
            raise ValueError("calibration reliability_prob must grow within [0, 1)")


DEFAULT_CALIBRATION = QosCalibration()

DEMAND_FIELDS = (
    "bandwidth_mbps",
    "delay_budget_ms",
    "reliability_prob",
    "concurrent_ues",
    "compute_units",
    "storage_gb",
    "handover_rate_per_min",
)

# Fields that add up across UEs and across reservations; the remaining
# fields are slice-level attributes (a delay budget does not accumulate).
ADDITIVE_FIELDS = ("bandwidth_mbps", "compute_units", "storage_gb", "concurrent_ues")


@dataclass(frozen=True)
class ResourceDemand:
    """Concrete, non-negative resource quantities backing one allocation/SLA."""

    bandwidth_mbps: float = 0.0
    delay_budget_ms: float = 0.0
    reliability_prob: float = 0.0
    concurrent_ues: float = 0.0
    compute_units: float = 0.0
    storage_gb: float = 0.0
    handover_rate_per_min: float = 0.0

    @classmethod
    def zero(cls) -> "ResourceDemand":
        return cls()

    def validate(self) -> None:
        for field in DEMAND_FIELDS:
            value = getattr(self, field)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{field} must be finite and non-negative: {value}")
        if not 0 <= self.reliability_prob < 1:
            raise ValueError(
                f"reliability_prob must lie in [0, 1): {self.reliability_prob}"
            )

    def add(self, other: "ResourceDemand") -> "ResourceDemand":
        return ResourceDemand(
            **{f: getattr(self, f) + getattr(other, f) for f in DEMAND_FIELDS}
        )

    def sub(self, other: "ResourceDemand") -> "ResourceDemand":
        return ResourceDemand(
            **{f: getattr(self, f) - getattr(other, f) for f in DEMAND_FIELDS}
        )

    def positive_part(self) -> "ResourceDemand":
        return ResourceDemand(
            **{f: max(getattr(self, f), 0.0) for f in DEMAND_FIELDS}
        )

    def covers(self, required: "ResourceDemand") -> bool:
        """True when this vector is at least as capable as ``required``.

        Every field compares with plain >= except the delay budget, where
        a smaller (tighter) budget is the stronger guarantee.
        """
        if self.delay_budget_ms > required.delay_budget_ms:
            return False
        for field in DEMAND_FIELDS:
            if field == "delay_budget_ms":
                continue
            if getattr(self, field) < getattr(required, field):
                return False
        return True

    def shortfalls(self, required: "ResourceDemand") -> list[str]:
        """Names of the fields on which ``self`` fails to cover ``required``."""
        out = []
        for field in DEMAND_FIELDS:
            have, need = getattr(self, field), getattr(required, field)
            bad = have > need if field == "delay_budget_ms" else have < need
            if bad:
                out.append(field)
        return out

    def strongest(self, other: "ResourceDemand") -> "ResourceDemand":
        """Fieldwise most-demanding combination of two vectors."""
        merged = {}
        for field in DEMAND_FIELDS:
            a, b = getattr(self, field), getattr(other, field)
            merged[field] = min(a, b) if field == "delay_budget_ms" else max(a, b)
        return ResourceDemand(**merged)

    def scaled_additive(self, factor: float) -> "ResourceDemand":
        """Scale the additive fields by ``factor``; attributes unchanged."""
        values = {f: getattr(self, f) for f in DEMAND_FIELDS}
        for field in ADDITIVE_FIELDS:
            values[field] *= factor
        return ResourceDemand(**values)


def quantify(qos: QosVector, cal: QosCalibration, ue_count: int) -> ResourceDemand:
    """Turn an ordinal QoS vector into quantities for ``ue_count`` users.

    Bandwidth, compute and storage are per-UE figures scaled linearly;
    the delay budget, reliability, concurrency ceiling and handover rate
    are level lookups independent of the user count.
    """
    if ue_count < 1:
        raise ValueError(f"ue_count must be >= 1, got {ue_count}")
    demand = ResourceDemand(
        bandwidth_mbps=cal.bandwidth_mbps[qos.bandwidth] * ue_count,
        delay_budget_ms=cal.delay_budget_ms[qos.delay_sensitivity],
        reliability_prob=cal.reliability_prob[qos.reliability],
        concurrent_ues=cal.scale_ues[qos.scale],
        compute_units=cal.compute_units[qos.compute] * ue_count,
        storage_gb=cal.storage_gb[qos.storage] * ue_count,
        handover_rate_per_min=cal.handover_per_min[qos.mobility],
    )
    demand.validate()
    return demand


def keepalive_floor(cal: QosCalibration) -> ResourceDemand:
    """Minimum demand kept on an empty slice so it can receive switches."""
    return quantify(QosVector.uniform(QosLevel.LOW), cal, 1)


def tradeoff_demand(demand: ResourceDemand, rho: float,
                    kappa: float = 1.0) -> ResourceDemand:
    """Apply the communication-computation trade-off at compression ratio rho.

    A more concise encoding (smaller rho) cuts bandwidth proportionally but
    charges extra encode compute of kappa * (1/rho - 1), independent of the
    user count.  rho = 1 is the identity.
    """
    if not 0 < rho <= 1:
        raise InvalidRho(rho)
    if rho == 1.0:
        return demand
    return replace(
        demand,
        bandwidth_mbps=rho * demand.bandwidth_mbps,
        compute_units=demand.compute_units + kappa * (1.0 / rho - 1.0),
    )
