"""Deterministic tick-driven simulation engine.

A scenario (pool, slice templates, UE roster, dictionary, event timeline,
parameters) runs against one provisioning policy.  Each tick executes a
fixed phase order: deliver events, sweep expiries, identify classes, run
the policy, apply its actions through the ledger, assure SLAs, sample
metrics.  Output is a pure function of (scenario, policy); the seed only
drives stochastic elements a scenario explicitly enables (event jitter).

Tick 0 is bootstrap for every policy: the declared template allocations
are applied and the roster registers, so all policies start from the same
footing and are compared from tick 1 on.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from jsonschema import Draft202012Validator

from semslice import semantic
from semslice.baselines import (
    Availability,
    ContextTable,
    DnsParams,
    Mobility,
    PolicyKind,
    UserContext,
    context_policy_step,
    dns_policy_step,
    initial_allocation_actions,
    static_policy_step,
)
from semslice.catalog import (
    DEFAULT_CLASS,
    DEMAND_FIELDS,
    QOS_METRICS,
    QosCalibration,
    QosLevel,
    QosVector,
    ResourceDemand,
    ServiceClass,
    TaskKind,
    aggregate_class,
    make_class,
    quantify,
    tradeoff_demand,
)
from semslice.errors import (
    CapacityExceeded,
    DuplicateRuleId,
    InvalidParams,
    ReleaseUnderflow,
    ScenarioParseError,
    ScenarioValidationError,
    SinkUnavailable,
    SlaFloor,
)
from semslice.orchestrator import (
    ProvisioningParams,
    ProvisioningState,
    ScaleAction,
    ScaleReason,
    SwitchRequest,
    UeSemanticState,
    check_slice_switch,
    decide_switch,
    provisioning_step,
)
from semslice.semantic import (
    Dictionary,
    ExtractionRule,
    KnowledgeGraph,
    SemanticEvent,
    extract_tasks,
    ingest_event,
    sweep,
)
from semslice.slices import (
    DOMAINS,
    MAX_ALLOWED_NSSAI,
    ResourcePool,
    SliceInstance,
    SNssai,
    SubnetRegistry,
    UeContext,
    assure_sla,
    attach,
    domain_commitments,
    scale_slice,
)

SERIES_COLUMNS = (
    "tick", "registered_ues", "satisfied_ues", "qos_satisfaction_rate",
    "sla_violations", "switch_requests", "switch_accepts", "switch_denials",
    "admission_denials", "actions_preempt", "actions_reclaim",
    "actions_tracking", "dropped_actions", "util_ran", "util_tn",
    "util_edge", "util_core", "util_storage", "mean_utilization",
)
EVENT_COLUMNS = ("tick", "ue_id", "stage", "outcome")
ACTION_COLUMNS = ("tick", "kind", "ue_or_slice", "from", "to", "reason", "outcome")
LEDGER_COLUMNS = ("tick", "slice_id", "domain", "committed", "capacity")

POOL_ROW_ID = "POOL"

SUMMARY_FILE = "metrics_summary.json"
SERIES_FILE = "metrics_series.csv"
EVENT_FILE = "event_log.csv"
ACTION_FILE = "action_log.csv"
LEDGER_FILE = "ledger_log.csv"
ARTIFACT_FILES = (SUMMARY_FILE, SERIES_FILE, EVENT_FILE, ACTION_FILE, LEDGER_FILE)


# --------------------------------------------------------------------------
# scenario model

@dataclass(frozen=True)
class SliceTemplate:
    """One declared slice: identity, class, SLA floor, starting allocation."""

    slice_id: str
    s_nssai: SNssai
    service_class: ServiceClass
    sla: ResourceDemand
    initial_allocation: ResourceDemand


@dataclass(frozen=True)
class ContextPoint:
    tick: int
    location_zone: str
    mobility: Mobility
    availability: Availability


@dataclass(frozen=True)
class UeSpec:
    ue_id: str
    stream_id: str
    allowed_nssai: tuple[SNssai, ...]
    initial_slice: str | None = None
    rho: float = 1.0
    context_script: tuple[ContextPoint, ...] = ()


@dataclass(frozen=True)
class JitterParams:
    enabled: bool = False
    max_shift: int = 0


@dataclass(frozen=True)
class PolicyParams:
    provisioning: ProvisioningParams = ProvisioningParams()
    dns: DnsParams = DnsParams()
    context_table: ContextTable | None = None
    jitter: JitterParams = JitterParams()


@dataclass(frozen=True)
class Scenario:
    duration_ticks: int
    seed: int
    pool: ResourcePool
    slices: tuple[SliceTemplate, ...]
    ues: tuple[UeSpec, ...]
    dictionary: Dictionary
    timeline: tuple[SemanticEvent, ...]
    calibration: QosCalibration
    params: PolicyParams


# --------------------------------------------------------------------------
# configuration schema

_DEMAND_SCHEMA = {
    "type": "object",
    "required": list(DEMAND_FIELDS),
    "additionalProperties": False,
    "properties": {f: {"type": "number", "minimum": 0} for f in DEMAND_FIELDS},
}

_QOS_SCHEMA = {
    "type": "object",
    "required": list(QOS_METRICS),
    "additionalProperties": False,
    "properties": {m: {"enum": ["LOW", "AVG", "HIGH"]} for m in QOS_METRICS},
}

_CLASS_SCHEMA = {
    "type": "object",
    "required": ["qos"],
    "additionalProperties": False,
    "properties": {
        "qos": _QOS_SCHEMA,
        "edge_fraction": {"type": "number", "minimum": 0, "maximum": 1},
    },
}

_LEVEL_TRIPLE = {
    "type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3,
}

_POOL_KEYS = ("ran_bandwidth_mbps", "tn_bandwidth_mbps", "edge_compute_units",
              "core_compute_units", "storage_gb")

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "semslice scenario",
    "type": "object",
    "required": ["duration_ticks", "pool", "slices", "ues", "dictionary", "timeline"],
    "additionalProperties": False,
    "properties": {
        "duration_ticks": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "pool": {
            "type": "object",
            "required": list(_POOL_KEYS),
            "additionalProperties": False,
            "properties": {k: {"type": "number", "minimum": 0} for k in _POOL_KEYS},
        },
        "slices": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["slice_id", "s_nssai", "service_class", "sla",
                             "initial_allocation"],
                "additionalProperties": False,
                "properties": {
                    "slice_id": {"type": "string", "minLength": 1},
                    "s_nssai": {"type": "string", "pattern": r"^[123]-\d+$"},
                    "service_class": _CLASS_SCHEMA,
                    "sla": _DEMAND_SCHEMA,
                    "initial_allocation": _DEMAND_SCHEMA,
                },
            },
        },
        "ues": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["ue_id", "stream_id", "allowed_nssai"],
                "additionalProperties": False,
                "properties": {
                    "ue_id": {"type": "string", "minLength": 1},
                    "stream_id": {"type": "string", "minLength": 1},
                    "allowed_nssai": {
                        "type": "array",
                        "items": {"type": "string", "pattern": r"^[123](-(\d+|\*))?$"},
                    },
                    "initial_slice": {"type": ["string", "null"]},
                    "rho": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                    "context_script": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["tick", "location_zone"],
                            "additionalProperties": False,
                            "properties": {
                                "tick": {"type": "integer", "minimum": 0},
                                "location_zone": {"type": "string", "minLength": 1},
                                "mobility": {"enum": [m.value for m in Mobility]},
                                "availability": {"enum": [a.value for a in Availability]},
                            },
                        },
                    },
                },
            },
        },
        "dictionary": {
            "type": "object",
            "required": ["vocabulary", "rules"],
            "additionalProperties": False,
            "properties": {
                "vocabulary": {
                    "type": "array",
                    "items": {"type": "string", "minLength": 1},
                },
                "rules": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["id", "pattern", "task"],
                        "additionalProperties": False,
                        "properties": {
                            "id": {"type": "string", "minLength": 1},
                            "pattern": {
                                "type": "array",
                                "minItems": 1,
                                "items": {"type": "string"},
                            },
                            "task": {"enum": [t.value for t in TaskKind]},
                            "critical": {"type": "boolean"},
                        },
                    },
                },
            },
        },
        "timeline": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["stream_id", "time", "triple"],
                "additionalProperties": False,
                "properties": {
                    "stream_id": {"type": "string", "minLength": 1},
                    "time": {"type": "integer", "minimum": 0},
                    "triple": {
                        "type": "array",
                        "items": {"type": "string", "minLength": 1},
                        "minItems": 3,
                        "maxItems": 3,
                    },
                    "ttl": {
                        "anyOf": [
                            {"type": "integer", "minimum": 1},
                            {"const": "persistent"},
                        ]
                    },
                },
            },
        },
        "calibration": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "bandwidth_mbps": _LEVEL_TRIPLE,
                "delay_budget_ms": _LEVEL_TRIPLE,
                "reliability_prob": _LEVEL_TRIPLE,
                "scale_ues": _LEVEL_TRIPLE,
                "compute_units": _LEVEL_TRIPLE,
                "storage_gb": _LEVEL_TRIPLE,
                "handover_per_min": _LEVEL_TRIPLE,
                "kappa": {"type": "number", "minimum": 0},
            },
        },
        "policy_params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "provisioning": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "preempt_factor": {"type": "number", "minimum": 1},
                        "hysteresis_ticks": {"type": "integer", "minimum": 0},
                        "drift_tolerance": {"type": "number", "minimum": 0,
                                            "exclusiveMaximum": 1},
                    },
                },
                "dns": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "window": {"type": "integer", "minimum": 1},
                        "high_watermark": {"type": "number"},
                        "low_watermark": {"type": "number"},
                        "step": {"type": "number", "exclusiveMinimum": 0,
                                 "maximum": 1},
                    },
                },
                "context": {
                    "type": "object",
                    "required": ["default_class", "mobile_class", "critical_class"],
                    "additionalProperties": False,
                    "properties": {
                        "default_class": _CLASS_SCHEMA,
                        "mobile_class": _CLASS_SCHEMA,
                        "critical_class": _CLASS_SCHEMA,
                        "critical_zones": {
                            "type": "array", "items": {"type": "string"},
                        },
                    },
                },
                "jitter": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "enabled": {"type": "boolean"},
                        "max_shift": {"type": "integer", "minimum": 0},
                    },
                },
            },
        },
    },
}


# --------------------------------------------------------------------------
# loading

def _demand_from_json(obj: Mapping[str, float]) -> ResourceDemand:
    demand = ResourceDemand(**{f: float(obj[f]) for f in DEMAND_FIELDS})
    demand.validate()
    return demand


def _demand_to_json(demand: ResourceDemand) -> dict[str, float]:
    return {f: getattr(demand, f) for f in DEMAND_FIELDS}


def _class_from_json(obj: Mapping[str, object]) -> ServiceClass:
    qos = QosVector.from_tokens(obj["qos"])
    return make_class(qos, edge_fraction=float(obj.get("edge_fraction", 0.0)))


def _class_to_json(cls: ServiceClass) -> dict[str, object]:
    return {"qos": cls.qos.tokens(), "edge_fraction": cls.edge_fraction}


def _initial_commitments(templates: tuple[SliceTemplate, ...]) -> dict[str, float]:
    total = {d: 0.0 for d in DOMAINS}
    for tpl in templates:
        for d, v in domain_commitments(
                tpl.initial_allocation, tpl.service_class.edge_fraction).items():
            total[d] += v
    return total


def load_scenario(text: str) -> Scenario:
    """Parse and fully validate a scenario document.

    Raises ScenarioParseError when the text is not valid JSON, and
    ScenarioValidationError carrying every (location, message) pair when
    the document violates the schema or cross-reference rules.  Loading
    has no side effects.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioParseError(err.msg, err.lineno, err.colno) from err

    issues: list[tuple[str, str]] = []
    validator = Draft202012Validator(SCENARIO_SCHEMA)
    for error in sorted(validator.iter_errors(doc), key=lambda e: e.json_path):
        issues.append((error.json_path, error.message))
    if issues:
        raise ScenarioValidationError(issues)

    duration = doc["duration_ticks"]
    seed = doc.get("seed", 0)

    pool = ResourcePool.from_capacities(**doc["pool"])

    templates: list[SliceTemplate] = []
    seen_slice_ids: set[str] = set()
    seen_nssai: set[SNssai] = set()
    for i, obj in enumerate(doc["slices"]):
        loc = f"$.slices[{i}]"
        sid = obj["slice_id"]
        if sid in seen_slice_ids:
            issues.append((loc, f"duplicate slice_id {sid!r}"))
            continue
        seen_slice_ids.add(sid)
        try:
            s_nssai = SNssai.parse(obj["s_nssai"])
            cls = _class_from_json(obj["service_class"])
            sla = _demand_from_json(obj["sla"])
            initial = _demand_from_json(obj["initial_allocation"])
        except ValueError as err:
            issues.append((loc, str(err)))
            continue
        if s_nssai in seen_nssai:
            issues.append((loc, f"duplicate s_nssai {s_nssai}"))
        seen_nssai.add(s_nssai)
        if not initial.covers(sla):
            missing = ", ".join(initial.shortfalls(sla))
            issues.append((loc, f"initial_allocation below sla on: {missing}"))
        templates.append(SliceTemplate(sid, s_nssai, cls, sla, initial))

    commit = _initial_commitments(tuple(templates))
    for i, domain in enumerate(DOMAINS):
        if commit[domain] > pool.capacity[i] + 1e-9:
            issues.append(("$.slices",
                           f"initial allocations need {commit[domain]:g} "
                           f"{domain} but pool capacity is {pool.capacity[i]:g}"))

    ue_specs: list[UeSpec] = []
    seen_ue_ids: set[str] = set()
    seen_streams: set[str] = set()
    for i, obj in enumerate(doc["ues"]):
        loc = f"$.ues[{i}]"
        uid = obj["ue_id"]
        if uid in seen_ue_ids:
            issues.append((loc, f"duplicate ue_id {uid!r}"))
            continue
        seen_ue_ids.add(uid)
        stream = obj["stream_id"]
        if stream in seen_streams:
            issues.append((loc, f"duplicate stream_id {stream!r}"))
        seen_streams.add(stream)
        allowed_raw = obj["allowed_nssai"]
        if len(allowed_raw) > MAX_ALLOWED_NSSAI:
            issues.append((f"{loc}.allowed_nssai",
                           f"a UE may list at most {MAX_ALLOWED_NSSAI} allowed "
                           f"S-NSSAIs, got {len(allowed_raw)}"))
            continue
        try:
            allowed = tuple(SNssai.parse(token) for token in allowed_raw)
        except ValueError as err:
            issues.append((f"{loc}.allowed_nssai", str(err)))
            continue
        initial_slice = obj.get("initial_slice")
        if initial_slice is not None and initial_slice not in seen_slice_ids:
            issues.append((f"{loc}.initial_slice",
                           f"unknown slice {initial_slice!r}"))
        script: list[ContextPoint] = []
        last_tick = -1
        for j, row in enumerate(obj.get("context_script", ())):
            if row["tick"] < last_tick:
                issues.append((f"{loc}.context_script[{j}]",
                               "script ticks must be non-decreasing"))
            last_tick = row["tick"]
            script.append(ContextPoint(
                tick=row["tick"],
                location_zone=row["location_zone"],
                mobility=Mobility(row.get("mobility", "STATIONARY")),
                availability=Availability(row.get("availability", "AVAILABLE")),
            ))
        ue_specs.append(UeSpec(
            ue_id=uid, stream_id=stream, allowed_nssai=allowed,
            initial_slice=initial_slice, rho=float(obj.get("rho", 1.0)),
            context_script=tuple(script),
        ))

    vocabulary = frozenset(doc["dictionary"]["vocabulary"])
    rules: list[ExtractionRule] = []
    seen_rule_ids: set[str] = set()
    for i, obj in enumerate(doc["dictionary"]["rules"]):
        loc = f"$.dictionary.rules[{i}]"
        if obj["id"] in seen_rule_ids:
            issues.append((loc, f"duplicate rule id {obj['id']!r}"))
            continue
        seen_rule_ids.add(obj["id"])
        try:
            rules.append(semantic.rule(obj["id"], obj["pattern"],
                                       TaskKind.parse(obj["task"]),
                                       critical=bool(obj.get("critical", False))))
        except ValueError as err:
            issues.append((loc, str(err)))
    try:
        dictionary = Dictionary(vocabulary=vocabulary, rules=tuple(rules))
    except (ValueError, DuplicateRuleId) as err:
        dictionary = Dictionary(vocabulary=vocabulary, rules=())
        issues.append(("$.dictionary", str(err)))

    events: list[SemanticEvent] = []
    last_time_global = 0
    for i, obj in enumerate(doc["timeline"]):
        loc = f"$.timeline[{i}]"
        if obj["time"] < last_time_global:
            issues.append((loc, "timeline must be sorted by time"))
        last_time_global = max(last_time_global, obj["time"])
        if obj["time"] >= duration:
            issues.append((loc, f"event time {obj['time']} outside the "
                                f"{duration}-tick run"))
        if obj["stream_id"] not in seen_streams:
            issues.append((loc, f"unknown stream {obj['stream_id']!r}"))
        for label in obj["triple"]:
            if label not in vocabulary:
                issues.append((loc, f"label {label!r} not in vocabulary"))
        ttl_raw = obj.get("ttl", 20)
        ttl = None if ttl_raw == "persistent" else int(ttl_raw)
        try:
            events.append(SemanticEvent(
                stream_id=obj["stream_id"], time=obj["time"],
                triple=tuple(obj["triple"]), ttl=ttl,
            ))
        except ValueError as err:
            issues.append((loc, str(err)))

    calibration = QosCalibration()
    cal_doc = doc.get("calibration", {})
    if cal_doc:
        kwargs = {k: (tuple(v) if isinstance(v, list) else v)
                  for k, v in cal_doc.items()}
        try:
            calibration = QosCalibration(**kwargs)
        except ValueError as err:
            issues.append(("$.calibration", str(err)))

    pp = doc.get("policy_params", {})
    try:
        provisioning = ProvisioningParams(**pp.get("provisioning", {}))
    except ValueError as err:
        provisioning = ProvisioningParams()
        issues.append(("$.policy_params.provisioning", str(err)))
    try:
        dns = DnsParams(**pp.get("dns", {}))
    except ValueError as err:
        dns = DnsParams()
        issues.append(("$.policy_params.dns", str(err)))
    context_table = None
    if "context" in pp:
        ctx = pp["context"]
        try:
            context_table = ContextTable(
                default_class=_class_from_json(ctx["default_class"]),
                mobile_class=_class_from_json(ctx["mobile_class"]),
                critical_class=_class_from_json(ctx["critical_class"]),
                critical_zones=frozenset(ctx.get("critical_zones", ())),
            )
        except ValueError as err:
            issues.append(("$.policy_params.context", str(err)))
    jitter = JitterParams(**pp.get("jitter", {}))

    if issues:
        raise ScenarioValidationError(issues)

    return Scenario(
        duration_ticks=duration,
        seed=seed,
        pool=pool,
        slices=tuple(templates),
        ues=tuple(ue_specs),
        dictionary=dictionary,
        timeline=tuple(events),
        calibration=calibration,
        params=PolicyParams(provisioning=provisioning, dns=dns,
                            context_table=context_table, jitter=jitter),
    )


def scenario_to_json(scn: Scenario) -> str:
    """Serialize a scenario to the canonical document form."""
    doc: dict[str, object] = {
        "duration_ticks": scn.duration_ticks,
        "seed": scn.seed,
        "pool": dict(zip(_POOL_KEYS, scn.pool.capacity)),
        "slices": [
            {
                "slice_id": t.slice_id,
                "s_nssai": str(t.s_nssai),
                "service_class": _class_to_json(t.service_class),
                "sla": _demand_to_json(t.sla),
                "initial_allocation": _demand_to_json(t.initial_allocation),
            }
            for t in scn.slices
        ],
        "ues": [
            {
                "ue_id": u.ue_id,
                "stream_id": u.stream_id,
                "allowed_nssai": [str(s) for s in u.allowed_nssai],
                "initial_slice": u.initial_slice,
                "rho": u.rho,
                "context_script": [
                    {
                        "tick": p.tick,
                        "location_zone": p.location_zone,
                        "mobility": p.mobility.value,
                        "availability": p.availability.value,
                    }
                    for p in u.context_script
                ],
            }
            for u in scn.ues
        ],
        "dictionary": {
            "vocabulary": sorted(scn.dictionary.vocabulary),
            "rules": [
                {
                    "id": r.id,
                    "pattern": [str(t) for t in r.pattern],
                    "task": r.task.value,
                    "critical": r.critical,
                }
                for r in scn.dictionary.rules
            ],
        },
        "timeline": [
            {
                "stream_id": e.stream_id,
                "time": e.time,
                "triple": list(e.triple),
                "ttl": "persistent" if e.ttl is None else e.ttl,
            }
            for e in scn.timeline
        ],
        "calibration": {
            "bandwidth_mbps": list(scn.calibration.bandwidth_mbps),
            "delay_budget_ms": list(scn.calibration.delay_budget_ms),
            "reliability_prob": list(scn.calibration.reliability_prob),
            "scale_ues": list(scn.calibration.scale_ues),
            "compute_units": list(scn.calibration.compute_units),
            "storage_gb": list(scn.calibration.storage_gb),
            "handover_per_min": list(scn.calibration.handover_per_min),
            "kappa": scn.calibration.kappa,
        },
        "policy_params": {
            "provisioning": {
                "preempt_factor": scn.params.provisioning.preempt_factor,
                "hysteresis_ticks": scn.params.provisioning.hysteresis_ticks,
                "drift_tolerance": scn.params.provisioning.drift_tolerance,
            },
            "dns": {
                "window": scn.params.dns.window,
                "high_watermark": scn.params.dns.high_watermark,
                "low_watermark": scn.params.dns.low_watermark,
                "step": scn.params.dns.step,
            },
            "jitter": {
                "enabled": scn.params.jitter.enabled,
                "max_shift": scn.params.jitter.max_shift,
            },
        },
    }
    if scn.params.context_table is not None:
        table = scn.params.context_table
        doc["policy_params"]["context"] = {
            "default_class": _class_to_json(table.default_class),
            "mobile_class": _class_to_json(table.mobile_class),
            "critical_class": _class_to_json(table.critical_class),
            "critical_zones": sorted(table.critical_zones),
        }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# built-in first-responder scenario

@dataclass(frozen=True)
class GeneratorParams:
    """Scale knobs for the built-in emergency-response scenario."""

    ues: int = 6
    duration_ticks: int = 200
    accident_tick: int = 50
    seed: int = 42

    def __post_init__(self) -> None:
        if not 1 <= self.ues <= 100:
            raise InvalidParams(f"ues must be in 1..100, got {self.ues}")
        if not 100 <= self.duration_ticks <= 10000:
            raise InvalidParams(
                f"duration_ticks must be in 100..10000, got {self.duration_ticks}")
        if not 1 <= self.accident_tick <= self.duration_ticks - 50:
            raise InvalidParams(
                f"accident_tick must leave at least 50 ticks of aftermath "
                f"({self.accident_tick} vs duration {self.duration_ticks})")


_ROLES = ("police", "fire", "medic")


def generate_first_responder(params: GeneratorParams = GeneratorParams()) -> Scenario:
    """Build the canonical emergency-response scenario.

    Phase A is routine monitoring (every responder's camera watches the
    road), phase B is the accident burst at ``accident_tick`` (collision,
    injury, vehicle fire; facts refreshed so they expire 30 ticks after
    onset), phase C is the response (tracking, push-to-talk, ambulance
    dispatch, firefighting), and phase D is the return to normal as the
    facts expire.
    """
    t_a = params.accident_tick
    n = params.ues
    roster = [f"{_ROLES[i % 3]}{i // 3 + 1}" for i in range(n)]

    cal = QosCalibration()
    monitor_class = aggregate_class({TaskKind.CONTINUOUS_MONITORING})
    alert_class = aggregate_class({TaskKind.ALERT_NOTIFICATION})
    ptt_class = aggregate_class({TaskKind.PUSH_TO_TALK})
    mobile_class = aggregate_class({
        TaskKind.CONTINUOUS_MONITORING,
        TaskKind.TRACKING_OBJECT_OF_INTEREST,
        TaskKind.PUSH_TO_TALK,
    })
    critical_class = make_class(QosVector.uniform(QosLevel.HIGH),
                                edge_fraction=0.5)

    templates = (
        SliceTemplate(
            slice_id="embb-video",
            s_nssai=SNssai(1, 1),
            service_class=monitor_class,
            sla=quantify(monitor_class.qos, cal, 1),
            initial_allocation=quantify(monitor_class.qos, cal, n),
        ),
        SliceTemplate(
            slice_id="urllc-alert",
            s_nssai=SNssai(2, 1),
            service_class=alert_class,
            sla=quantify(alert_class.qos, cal, 1),
            initial_allocation=quantify(alert_class.qos, cal, 2),
        ),
        SliceTemplate(
            slice_id="mmtc-ptt",
            s_nssai=SNssai(3, 1),
            service_class=ptt_class,
            sla=quantify(ptt_class.qos, cal, 1),
            initial_allocation=quantify(ptt_class.qos, cal, 2),
        ),
    )

    # Pool sized so the reactive baseline can overshoot without starving
    # anyone: room for several times the routine load.
    base = quantify(monitor_class.qos, cal, max(n, 1))
    pool = ResourcePool.from_capacities(
        ran_bandwidth_mbps=base.bandwidth_mbps * 5 + 200,
        tn_bandwidth_mbps=base.bandwidth_mbps * 5 + 200,
        edge_compute_units=base.compute_units * 8 + 100,
        core_compute_units=base.compute_units * 8 + 100,
        storage_gb=base.storage_gb * 5 + 500,
    )

    allowed = (SNssai(1), SNssai(2), SNssai(3))
    leads = {role: f"{role}1" for role in _ROLES}

    def script_for(ue: str) -> tuple[ContextPoint, ...]:
        role = ue.rstrip("0123456789")
        base_zone = f"{role}-base"
        is_lead = ue == leads[role]
        return (
            ContextPoint(0, base_zone, Mobility.STATIONARY,
                         Availability.AVAILABLE),
            ContextPoint(t_a + 5 if is_lead else t_a + 10,
                         "crash-site" if is_lead else base_zone,
                         Mobility.MOBILE, Availability.BUSY),
            ContextPoint(t_a + 45, base_zone, Mobility.STATIONARY,
                         Availability.AVAILABLE),
        )

    ues = tuple(
        UeSpec(
            ue_id=ue,
            stream_id=f"{ue}-stream",
            allowed_nssai=allowed,
            initial_slice="embb-video",
            rho=1.0,
            context_script=script_for(ue),
        )
        for ue in roster
    )

    events: list[SemanticEvent] = []

    def emit(stream_ue: str, time: int, triple: tuple[str, str, str],
             ttl: int | None) -> None:
        events.append(SemanticEvent(stream_id=f"{stream_ue}-stream", time=time,
                                    triple=triple, ttl=ttl))

    # phase A: every responder's camera watches the road, persistently
    for ue in roster:
        emit(ue, 0, (f"cam-{ue}", "observes", "road"), semantic.PERSISTENT)

    police = [u for u in roster if u.startswith("police")]
    fire = [u for u in roster if u.startswith("fire")]
    medic = [u for u in roster if u.startswith("medic")]

    # phase B: the accident burst; the critical facts are refreshed so the
    # last refresh at t_a+10 expires 30 ticks after onset
    if police:
        for t in (t_a, t_a + 5, t_a + 10):
            emit(police[0], t, ("bus", "hits", "car"), 20)
            emit(police[0], t, ("driver", "injured_in", "accident"), 20)
    if fire:
        for t in (t_a + 2, t_a + 7, t_a + 10):
            emit(fire[0], t, ("bus", "catches", "fire"), 20)

    # phase C: the response effort, fading out by t_a+40
    if fire:
        for t in (t_a + 15, t_a + 25):
            emit(fire[0], t, (fire[0], "extinguishes", "fire"), 15)
    if medic:
        for t in (t_a + 6, t_a + 20):
            emit(medic[0], t, ("ambulance", "dispatched_to", "accident"), 20)
            emit(medic[0], t, ("driver", "injured_in", "accident"), 20)
    for supporter in police[1:]:
        for t in (t_a + 3, t_a + 20):
            emit(supporter, t, (supporter, "tracks", "suspect"), 20)
        for t in (t_a + 8, t_a + 20):
            emit(supporter, t, (supporter, "speaks_on", "ptt_channel"), 20)
    for supporter in fire[1:] + medic[1:]:
        for t in (t_a + 8, t_a + 20):
            emit(supporter, t, (supporter, "speaks_on", "ptt_channel"), 20)

    events.sort(key=lambda e: e.time)

    extra_vocab = set(roster)
    extra_vocab.update(f"cam-{u}" for u in roster)
    dictionary = semantic.default_dictionary(
        extra_vocabulary=frozenset(extra_vocab))

    return Scenario(
        duration_ticks=params.duration_ticks,
        seed=params.seed,
        pool=pool,
        slices=templates,
        ues=ues,
        dictionary=dictionary,
        timeline=tuple(events),
        calibration=cal,
        params=PolicyParams(
            provisioning=ProvisioningParams(),
            dns=DnsParams(),
            context_table=ContextTable(
                default_class=monitor_class,
                mobile_class=mobile_class,
                critical_class=critical_class,
                critical_zones=frozenset({"crash-site"}),
            ),
            jitter=JitterParams(),
        ),
    )


# --------------------------------------------------------------------------
# metrics

@dataclass(frozen=True)
class TickRow:
    tick: int
    registered_ues: int
    satisfied_ues: int
    qos_satisfaction_rate: float
    sla_violations: int
    switch_requests: int
    switch_accepts: int
    switch_denials: int
    admission_denials: int
    actions_preempt: int
    actions_reclaim: int
    actions_tracking: int
    dropped_actions: int
    util_ran: float
    util_tn: float
    util_edge: float
    util_core: float
    util_storage: float
    mean_utilization: float

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, name) for name in SERIES_COLUMNS)


@dataclass(frozen=True)
class MetricsReport:
    """Everything one run produced: series, summary scalars and raw logs."""

    policy: str
    duration_ticks: int
    ue_count: int
    series: tuple[TickRow, ...]
    summary: dict[str, object]
    event_rows: tuple[tuple, ...]
    action_rows: tuple[tuple, ...]
    ledger_rows: tuple[tuple, ...]


def format_demand_token(demand: ResourceDemand) -> str:
    """Compact additive-fields rendering used in the action log."""
    return (f"bw={demand.bandwidth_mbps!r};cu={demand.compute_units!r};"
            f"st={demand.storage_gb!r};ue={demand.concurrent_ues!r}")


def parse_demand_token(token: str) -> ResourceDemand:
    """Inverse of :func:`format_demand_token` (non-additive fields zero)."""
    parts = dict(item.split("=", 1) for item in token.split(";"))
    return ResourceDemand(
        bandwidth_mbps=float(parts["bw"]),
        compute_units=float(parts["cu"]),
        storage_gb=float(parts["st"]),
        concurrent_ues=float(parts["ue"]),
    )


_POOL_LOAD_FIELDS = ("bandwidth_mbps", "compute_units", "storage_gb")


class _Simulation:
    """Mutable state for one run; see :func:`run` for the contract."""

    def __init__(self, scn: Scenario, policy: PolicyKind):
        self.scn = scn
        self.policy = policy
        self.cal = scn.calibration
        self.pool = replace(scn.pool, committed=(0.0,) * len(DOMAINS))
        self.registry = SubnetRegistry()
        self.slices: dict[str, SliceInstance] = {
            t.slice_id: SliceInstance(
                slice_id=t.slice_id, s_nssai=t.s_nssai,
                service_class=t.service_class,
                allocation=ResourceDemand.zero(), sla=t.sla,
            )
            for t in scn.slices
        }
        self.nst_targets = {t.slice_id: t.initial_allocation for t in scn.slices}
        self.ues: dict[str, UeContext] = {
            u.ue_id: UeContext(ue_id=u.ue_id, allowed_nssai=u.allowed_nssai,
                               stream_id=u.stream_id)
            for u in scn.ues
        }
        self.specs = {u.ue_id: u for u in scn.ues}
        self.stream_owner = {u.stream_id: u.ue_id for u in scn.ues}
        self.stream_kgs: dict[str, KnowledgeGraph] = {
            u.stream_id: KnowledgeGraph() for u in scn.ues
        }
        self.global_kg = KnowledgeGraph()
        slice_classes = {t.slice_id: t.service_class for t in scn.slices}
        self.ue_states: dict[str, UeSemanticState] = {
            u.ue_id: UeSemanticState(
                ue_id=u.ue_id, last_tasks=frozenset(),
                identified_class=DEFAULT_CLASS,
                served_class=(slice_classes[u.initial_slice]
                              if u.initial_slice else DEFAULT_CLASS),
                rho=u.rho,
            )
            for u in scn.ues
        }
        self.pending: dict[str, SwitchRequest] = {}
        self.prov_state = ProvisioningState()
        self.util_history: dict[str, list[float]] = {sid: [] for sid in self.slices}
        self.ground: dict[str, tuple[ServiceClass, ResourceDemand]] = {}
        # keyed by UE; holding the graph keeps identity comparison sound
        self._identify_cache: dict[
            str, tuple[KnowledgeGraph, frozenset, ServiceClass]] = {}
        self.schedule = self._build_schedule()

        if policy is PolicyKind.CONTEXT_AWARE:
            self._check_context_ready()

        self.event_rows: list[tuple] = []
        self.action_rows: list[tuple] = []
        self.ledger_rows: list[tuple] = []
        self.series: list[TickRow] = []

        self.total_satisfied = 0
        self.total_violations = 0
        self.switch_requested = 0
        self.switch_accepted = 0
        self.switch_denied = 0
        self.latency_sum = 0
        self.admission_denials = 0
        self.dropped_actions = 0
        self.action_counts = {reason.value: 0 for reason in ScaleReason}
        self.util_sums = [0.0] * len(DOMAINS)

    # -- setup -------------------------------------------------------------

    def _check_context_ready(self) -> None:
        issues = []
        if self.scn.params.context_table is None:
            issues.append(("$.policy_params.context",
                           "the context policy requires a context table"))
        for i, spec in enumerate(self.scn.ues):
            if not any(p.tick == 0 for p in spec.context_script):
                issues.append((f"$.ues[{i}].context_script",
                               f"UE {spec.ue_id!r} needs a tick-0 context row "
                               f"to run under the context policy"))
        if issues:
            raise ScenarioValidationError(issues)

    def _build_schedule(self) -> list[list[SemanticEvent]]:
        duration = self.scn.duration_ticks
        jitter = self.scn.params.jitter
        rng = random.Random(self.scn.seed)
        last_by_stream: dict[str, int] = {}
        schedule: list[list[SemanticEvent]] = [[] for _ in range(duration)]
        for event in self.scn.timeline:
            t = event.time
            if jitter.enabled and jitter.max_shift > 0:
                t += rng.randint(-jitter.max_shift, jitter.max_shift)
            t = min(max(t, 0), duration - 1)
            t = max(t, last_by_stream.get(event.stream_id, 0))
            last_by_stream[event.stream_id] = t
            schedule[t].append(replace(event, time=t))
        return schedule

    # -- per-tick phases -----------------------------------------------------

    def _deliver_events(self, now: int) -> None:
        for event in self.schedule[now]:
            self.stream_kgs[event.stream_id] = ingest_event(
                self.stream_kgs[event.stream_id], event, self.scn.dictionary, now)
            self.global_kg = ingest_event(
                self.global_kg, event, self.scn.dictionary, now)
            owner = self.stream_owner.get(event.stream_id, event.stream_id)
            self.event_rows.append((now, owner, "EVENT", "ok"))

    def _sweep(self, now: int) -> None:
        for stream, kg in self.stream_kgs.items():
            self.stream_kgs[stream] = sweep(kg, now)
        self.global_kg = sweep(self.global_kg, now)

    def _identify(self, now: int) -> None:
        semantic_run = self.policy is PolicyKind.SEMANTIC
        for ue_id in sorted(self.ues):
            spec = self.specs[ue_id]
            kg = self.stream_kgs[spec.stream_id]
            cached = self._identify_cache.get(ue_id)
            if cached is not None and cached[0] is kg:
                tasks, cls = cached[1], cached[2]
            else:
                tasks = extract_tasks(kg, self.scn.dictionary, now)
                cls = aggregate_class(tasks)
                self._identify_cache[ue_id] = (kg, tasks, cls)
            rho = spec.rho if semantic_run else 1.0
            need = tradeoff_demand(quantify(cls.qos, self.cal, 1), rho,
                                   self.cal.kappa)
            self.ground[ue_id] = (cls, need)
            if semantic_run:
                self.ue_states[ue_id] = replace(
                    self.ue_states[ue_id], last_tasks=tasks,
                    identified_class=cls)

    def _contexts_at(self, now: int) -> dict[str, UserContext]:
        contexts: dict[str, UserContext] = {}
        for ue_id, spec in self.specs.items():
            current = None
            for point in spec.context_script:
                if point.tick <= now:
                    current = point
                else:
                    break
            if current is not None:
                contexts[ue_id] = UserContext(
                    ue_id=ue_id, location_zone=current.location_zone,
                    mobility=current.mobility,
                    availability=current.availability)
        return contexts

    def _policy_step(self, now: int) -> tuple[list[SwitchRequest], list[ScaleAction]]:
        if self.policy is PolicyKind.STATIC:
            return [], static_policy_step(self.nst_targets, now)
        if self.policy is PolicyKind.DNS:
            return [], dns_policy_step(self.slices, self.pool,
                                       self.util_history,
                                       self.scn.params.dns, now)
        if self.policy is PolicyKind.CONTEXT_AWARE:
            current_slices = {u: self.ues[u].current_slice for u in self.ues}
            return context_policy_step(
                self._contexts_at(now), self.scn.params.context_table,
                self.ue_states, current_slices, self.slices, self.pending,
                self.cal, self.scn.params.provisioning.drift_tolerance, now)
        requests = []
        for ue_id in sorted(self.ue_states):
            req = check_slice_switch(self.ue_states[ue_id],
                                     self.ues[ue_id].current_slice, now,
                                     self.pending.get(ue_id))
            if req is not None:
                requests.append(req)
        actions, self.prov_state = provisioning_step(
            self.global_kg, self.scn.dictionary, self.slices, self.ue_states,
            self.pool, self.cal, self.scn.params.provisioning,
            self.prov_state, now)
        return requests, actions

    def _apply(self, requests: list[SwitchRequest],
               actions: list[ScaleAction], now: int) -> None:
        if now == 0 and self.policy is not PolicyKind.STATIC:
            actions = initial_allocation_actions(self.nst_targets, 0)
        for action in actions:
            self._apply_scale(action, now)
        if now == 0:
            self._register_roster(now)
        for req in sorted(requests, key=lambda r: r.ue_id):
            self._decide(req, now)
        requested_ues = {r.ue_id for r in requests}
        for ue_id in list(self.pending):
            if ue_id not in requested_ues:
                del self.pending[ue_id]

    def _apply_scale(self, action: ScaleAction, now: int) -> None:
        slc = self.slices.get(action.slice_id)
        label = action.reason.value
        if slc is None:
            self.action_rows.append((now, "SCALE", action.slice_id, "-", "-",
                                     label, "dropped:UnknownSlice"))
            self.dropped_actions += 1
            self.tick_denials += 1
            return
        before = slc.allocation
        try:
            new_slc, new_pool = scale_slice(slc, action.target, self.pool,
                                            self.registry, now)
        except (CapacityExceeded, SlaFloor, ReleaseUnderflow) as err:
            detail = (getattr(err, "domain", None)
                      or getattr(err, "metric", None)
                      or getattr(err, "field", None))
            outcome = (f"dropped:{type(err).__name__}"
                       + (f":{detail}" if detail else ""))
            self.action_rows.append((now, "SCALE", action.slice_id,
                                     format_demand_token(before),
                                     format_demand_token(action.target),
                                     label, outcome))
            self.dropped_actions += 1
            self.tick_denials += 1
            return
        self.slices[action.slice_id] = new_slc
        self.pool = new_pool
        self.action_counts[label] = self.action_counts.get(label, 0) + 1
        self.tick_actions[label] = self.tick_actions.get(label, 0) + 1
        self.action_rows.append((now, "SCALE", action.slice_id,
                                 format_demand_token(before),
                                 format_demand_token(action.target),
                                 label, "ok"))

    def _register_roster(self, now: int) -> None:
        for ue_id in sorted(self.ues):
            spec = self.specs[ue_id]
            if spec.initial_slice is None:
                continue
            target = self.slices[spec.initial_slice]
            result = attach(self.ues[ue_id], target.s_nssai, self.slices,
                            self.pool)
            for stage, outcome in result.transitions:
                self.event_rows.append((now, ue_id, stage, outcome))
            if result.registered:
                self.ues[ue_id] = result.ue
                self.slices[result.slice.slice_id] = result.slice
                self.ue_states[ue_id] = replace(
                    self.ue_states[ue_id],
                    served_class=result.slice.service_class)
                self.action_rows.append((now, "ATTACH", ue_id, "-",
                                         result.slice.slice_id, "INITIAL",
                                         "registered"))
            else:
                self.ues[ue_id] = result.ue
                self.tick_denials += 1
                self.admission_denials += 1
                self.action_rows.append((now, "ATTACH", ue_id, "-",
                                         spec.initial_slice, "INITIAL",
                                         f"rejected:{result.reason}"))

    def _decide(self, req: SwitchRequest, now: int) -> None:
        if req.issued_at == now:
            self.switch_requested += 1
            self.tick_requests += 1
        outcome = decide_switch(req, self.ues[req.ue_id], self.ue_states,
                                self.slices, self.pool, self.registry,
                                self.cal, now)
        if not outcome.accepted:
            self.pending[req.ue_id] = req
            self.switch_denied += 1
            self.tick_switch_denials += 1
            self.admission_denials += 1
            self.tick_denials += 1
            self.action_rows.append((now, "SWITCH", req.ue_id,
                                     req.from_slice or "-", req.to_class.id,
                                     req.to_class.id,
                                     f"denied:{outcome.reason}"))
            return

        if outcome.created_slice is not None:
            created = outcome.slices[outcome.created_slice]
            self.util_history.setdefault(outcome.created_slice, [])
            self.action_rows.append((
                now, "CREATE", outcome.created_slice, "-",
                f"{created.service_class.id};"
                f"ef={created.service_class.edge_fraction!r}",
                "SWITCH", "ok"))
        for slice_id, old_demand, new_demand in outcome.scale_log:
            self.action_rows.append((now, "SCALE", slice_id,
                                     format_demand_token(old_demand),
                                     format_demand_token(new_demand),
                                     "SWITCH", "ok"))
        if req.from_slice is not None:
            self.event_rows.append((now, req.ue_id, "DETACHED", "ok"))
        for stage, text in outcome.transitions:
            self.event_rows.append((now, req.ue_id, stage, text))

        self.slices = dict(outcome.slices)
        self.pool = outcome.pool
        self.ues[req.ue_id] = outcome.ue
        self.ue_states[req.ue_id] = replace(self.ue_states[req.ue_id],
                                            served_class=req.to_class)
        self.pending.pop(req.ue_id, None)
        self.switch_accepted += 1
        self.tick_switch_accepts += 1
        self.latency_sum += now - req.issued_at
        self.action_rows.append((now, "SWITCH", req.ue_id,
                                 req.from_slice or "-", outcome.to_slice,
                                 req.to_class.id, "accepted"))

    def _slice_load(self, slc: SliceInstance) -> float:
        load = 0.0
        for field_name in _POOL_LOAD_FIELDS:
            have = getattr(slc.allocation, field_name)
            need = sum(getattr(self.ground[u][1], field_name)
                       for u in slc.attached_ues if u in self.ground)
            if need <= 0:
                continue
            load = max(load, 1.0 if have <= 0 else min(need / have, 1.0))
        return load

    def _satisfied(self, ue_id: str) -> bool:
        ue = self.ues[ue_id]
        if ue.current_slice is None:
            return False
        slc = self.slices[ue.current_slice]
        members = len(slc.attached_ues)
        if members > slc.allocation.concurrent_ues:
            return False
        need = self.ground[ue_id][1]
        share = replace(
            slc.allocation,
            bandwidth_mbps=slc.allocation.bandwidth_mbps / members,
            compute_units=slc.allocation.compute_units / members,
            storage_gb=slc.allocation.storage_gb / members,
        )
        return share.covers(need)

    def _sample(self, now: int, violations: int) -> None:
        registered = sum(1 for u in self.ues.values()
                         if u.current_slice is not None)
        satisfied = sum(1 for ue_id in self.ues if self._satisfied(ue_id))
        self.total_satisfied += satisfied
        self.total_violations += violations

        util = self.pool.utilization()
        for i, value in enumerate(util):
            self.util_sums[i] += value
        mean_util = sum(util) / len(util)

        self.series.append(TickRow(
            tick=now,
            registered_ues=registered,
            satisfied_ues=satisfied,
            qos_satisfaction_rate=satisfied / len(self.ues) if self.ues else 0.0,
            sla_violations=violations,
            switch_requests=self.tick_requests,
            switch_accepts=self.tick_switch_accepts,
            switch_denials=self.tick_switch_denials,
            admission_denials=self.tick_denials,
            actions_preempt=self.tick_actions.get(
                ScaleReason.INCIDENT_PREEMPT.value, 0),
            actions_reclaim=self.tick_actions.get(
                ScaleReason.NORMALCY_RECLAIM.value, 0),
            actions_tracking=self.tick_actions.get(
                ScaleReason.DEMAND_TRACKING.value, 0),
            dropped_actions=self.dropped_actions - self.tick_dropped_base,
            util_ran=util[0], util_tn=util[1], util_edge=util[2],
            util_core=util[3], util_storage=util[4],
            mean_utilization=mean_util,
        ))

        for sid in sorted(self.slices):
            slc = self.slices[sid]
            commitments = domain_commitments(slc.allocation,
                                             slc.service_class.edge_fraction)
            for i, domain in enumerate(DOMAINS):
                self.ledger_rows.append((now, sid, domain,
                                         commitments[domain],
                                         self.pool.capacity[i]))
        for i, domain in enumerate(DOMAINS):
            self.ledger_rows.append((now, POOL_ROW_ID, domain,
                                     self.pool.committed[i],
                                     self.pool.capacity[i]))

        for sid in sorted(self.slices):
            self.util_history.setdefault(sid, []).append(
                self._slice_load(self.slices[sid]))

    def _reset_tick_counters(self) -> None:
        self.tick_requests = 0
        self.tick_switch_accepts = 0
        self.tick_switch_denials = 0
        self.tick_denials = 0
        self.tick_dropped_base = self.dropped_actions
        self.tick_actions: dict[str, int] = {}

    def run(self) -> MetricsReport:
        for now in range(self.scn.duration_ticks):
            self._reset_tick_counters()
            self._deliver_events(now)
            self._sweep(now)
            self._identify(now)
            requests, actions = self._policy_step(now)
            self._apply(requests, actions, now)
            violations = assure_sla(self.slices, now)
            self._sample(now, len(violations))
        return self._report()

    def _report(self) -> MetricsReport:
        duration = self.scn.duration_ticks
        total_ue_ticks = duration * len(self.ues)
        mean_util = {domain: self.util_sums[i] / duration
                     for i, domain in enumerate(DOMAINS)}
        summary = {
            "policy": self.policy.value,
            "duration_ticks": duration,
            "ue_count": len(self.ues),
            "qos_satisfaction_rate": (self.total_satisfied / total_ue_ticks
                                      if total_ue_ticks else 0.0),
            "sla_violation_count": self.total_violations,
            "mean_utilization": mean_util,
            "mean_pool_utilization": sum(mean_util.values()) / len(DOMAINS),
            "switch_requested": self.switch_requested,
            "switch_accepted": self.switch_accepted,
            "switch_denied": self.switch_denied,
            "mean_switch_latency": (self.latency_sum / self.switch_accepted
                                    if self.switch_accepted else 0.0),
            "admission_denials": self.admission_denials,
            "action_counts": dict(sorted(self.action_counts.items())),
            "dropped_actions": self.dropped_actions,
        }
        return MetricsReport(
            policy=self.policy.value,
            duration_ticks=duration,
            ue_count=len(self.ues),
            series=tuple(self.series),
            summary=summary,
            event_rows=tuple(self.event_rows),
            action_rows=tuple(self.action_rows),
            ledger_rows=tuple(self.ledger_rows),
        )


def run(scn: Scenario, policy: PolicyKind) -> MetricsReport:
    """Simulate the scenario under one policy.

    Deterministic: the same (scenario, policy) pair always produces the
    same report, byte for byte once emitted.  Infeasible actions are
    dropped and counted rather than raised.  Context runs are checked up
    front (table present, tick-0 context rows for the roster), so nothing
    raises after validation.
    """
    return _Simulation(scn, policy).run()


# --------------------------------------------------------------------------
# emission

def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(value) for value in row))
    path.write_text("\n".join(lines) + "\n")


def emit_metrics(report: MetricsReport, out_dir: Path | str) -> None:
    """Write the five artifact files; repeated emission is byte-identical."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / SUMMARY_FILE).write_text(
            json.dumps(report.summary, indent=2, sort_keys=True) + "\n")
        _write_csv(out / SERIES_FILE, SERIES_COLUMNS,
                   (row.as_tuple() for row in report.series))
        _write_csv(out / EVENT_FILE, EVENT_COLUMNS, report.event_rows)
        _write_csv(out / ACTION_FILE, ACTION_COLUMNS, report.action_rows)
        _write_csv(out / LEDGER_FILE, LEDGER_COLUMNS, report.ledger_rows)
    except OSError as err:
        raise SinkUnavailable(str(out), err) from err


COMPARISON_FILE = "comparison.csv"
COMPARISON_COLUMNS = (
    "policy", "qos_satisfaction_rate", "sla_violation_count",
    "mean_pool_utilization", "util_ran", "util_tn", "util_edge", "util_core",
    "util_storage", "switch_requested", "switch_accepted", "switch_denied",
    "mean_switch_latency", "admission_denials", "preempt_actions",
    "reclaim_actions", "tracking_actions", "dropped_actions",
)


def comparison_row(report: MetricsReport) -> tuple:
    s = report.summary
    mean_util = s["mean_utilization"]
    counts = s["action_counts"]
    return (
        s["policy"], s["qos_satisfaction_rate"], s["sla_violation_count"],
        s["mean_pool_utilization"], mean_util["RAN"], mean_util["TN"],
        mean_util["EDGE"], mean_util["CORE"], mean_util["STORAGE"],
        s["switch_requested"], s["switch_accepted"], s["switch_denied"],
        s["mean_switch_latency"], s["admission_denials"],
        counts.get(ScaleReason.INCIDENT_PREEMPT.value, 0),
        counts.get(ScaleReason.NORMALCY_RECLAIM.value, 0),
        counts.get(ScaleReason.DEMAND_TRACKING.value, 0),
        s["dropped_actions"],
    )


def emit_comparison(reports: list[MetricsReport], out_dir: Path | str) -> None:
    """Write comparison.csv, one row per report in the given order."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / COMPARISON_FILE, COMPARISON_COLUMNS,
                   (comparison_row(r) for r in reports))
    except OSError as err:
        raise SinkUnavailable(str(out), err) from err
