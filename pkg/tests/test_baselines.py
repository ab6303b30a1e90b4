"""Comparison policies: fixed, threshold auto-scaling, context mapping."""

from __future__ import annotations

from dataclasses import replace

import pytest

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
    DEFAULT_CALIBRATION,
    DEFAULT_CLASS,
    QosLevel,
    QosVector,
    ResourceDemand,
    keepalive_floor,
    make_class,
    quantify,
)
from semslice.errors import MissingContext
from semslice.orchestrator import ScaleReason, SwitchRequest, UeSemanticState
from semslice.slices import ResourcePool, SliceInstance, SNssai

CAL = DEFAULT_CALIBRATION
FLOOR = keepalive_floor(CAL)
MOBILE_CLASS = make_class(QosVector(
    QosLevel.AVG, QosLevel.LOW, QosLevel.LOW, QosLevel.LOW,
    QosLevel.LOW, QosLevel.LOW, QosLevel.HIGH))
CRITICAL_CLASS = make_class(QosVector(
    QosLevel.AVG, QosLevel.HIGH, QosLevel.HIGH, QosLevel.AVG,
    QosLevel.HIGH, QosLevel.AVG, QosLevel.LOW))
TABLE = ContextTable(default_class=DEFAULT_CLASS, mobile_class=MOBILE_CLASS,
                     critical_class=CRITICAL_CLASS,
                     critical_zones=frozenset({"zone-7"}))


def mk_slice(slice_id="s1", cls=DEFAULT_CLASS, allocation=None, sla=None,
             members=()):
    return SliceInstance(slice_id=slice_id, s_nssai=SNssai(1, 1),
                         service_class=cls,
                         allocation=allocation or quantify(cls.qos, CAL, 1),
                         sla=sla or FLOOR, attached_ues=frozenset(members))


def mk_state(ue_id, served=DEFAULT_CLASS, identified=None):
    return UeSemanticState(ue_id=ue_id, last_tasks=frozenset(),
                           identified_class=identified or served,
                           served_class=served, rho=1.0)


BIG_POOL = ResourcePool(capacity=(1e6,) * 5)


# -- fixed provisioning -------------------------------------------------------

def test_static_acts_only_at_tick_zero():
    targets = {"b": ResourceDemand(bandwidth_mbps=2.0),
               "a": ResourceDemand(bandwidth_mbps=1.0)}
    actions = static_policy_step(targets, now=0)
    assert [(a.slice_id, a.target) for a in actions] \
        == [("a", targets["a"]), ("b", targets["b"])]
    assert all(a.reason is ScaleReason.DEMAND_TRACKING and a.issued_at == 0
               for a in actions)
    for now in (1, 5, 199):
        assert static_policy_step(targets, now) == []


def test_initial_allocation_actions_stamp_the_given_tick():
    actions = initial_allocation_actions({"s": FLOOR}, now=3)
    assert actions[0].issued_at == 3


# -- threshold auto-scaling ---------------------------------------------------

def hist(*means):
    return list(means)


def test_dns_waits_for_a_full_window():
    slc = mk_slice()
    actions = dns_policy_step({"s1": slc}, BIG_POOL, {"s1": hist(0.9, 0.9, 0.9, 0.9)},
                              DnsParams(), now=6)
    assert actions == []


def test_dns_holds_between_watermarks():
    slc = mk_slice()
    actions = dns_policy_step({"s1": slc}, BIG_POOL, {"s1": hist(0.5) * 5},
                              DnsParams(), now=6)
    assert actions == []


def test_dns_scales_up_above_high_watermark():
    slc = mk_slice()
    (action,) = dns_policy_step({"s1": slc}, BIG_POOL, {"s1": hist(0.9) * 5},
                                DnsParams(), now=6)
    assert action.target == slc.allocation.scaled_additive(1.25)
    assert action.reason is ScaleReason.DEMAND_TRACKING


def test_dns_scales_down_below_low_watermark_respecting_sla():
    sla = ResourceDemand(compute_units=0.9)
    slc = mk_slice(sla=sla)
    (action,) = dns_policy_step({"s1": slc}, BIG_POOL, {"s1": hist(0.2) * 5},
                                DnsParams(), now=6)
    want = slc.allocation.scaled_additive(0.75).strongest(sla)
    assert action.target == want
    assert action.target.compute_units == 0.9


def test_dns_watermarks_are_strict():
    slc = mk_slice()
    for mean in (0.8, 0.3):
        assert dns_policy_step({"s1": slc}, BIG_POOL, {"s1": hist(mean) * 5},
                               DnsParams(), now=6) == []


def test_dns_uses_only_the_trailing_window():
    slc = mk_slice()
    history = hist(0.0) * 10 + hist(0.9) * 5
    (action,) = dns_policy_step({"s1": slc}, BIG_POOL, {"s1": history},
                                DnsParams(), now=16)
    assert action.target == slc.allocation.scaled_additive(1.25)


def test_dns_growth_clamps_to_total_capacity():
    slc = mk_slice()
    # capacity exactly equals this slice's holdings: cap factor is 1.0,
    # the clamped target equals the allocation, so no action is emitted
    tight = ResourcePool(capacity=(1.0, 1.0, 1e6, 1.0, 1.0),
                         committed=(1.0, 1.0, 0.0, 1.0, 1.0))
    assert dns_policy_step({"s1": slc}, tight, {"s1": hist(0.9) * 5},
                           DnsParams(), now=6) == []


def test_dns_skips_no_op_shrink_at_the_sla_floor():
    slc = mk_slice(sla=quantify(DEFAULT_CLASS.qos, CAL, 1))
    assert dns_policy_step({"s1": slc}, BIG_POOL, {"s1": hist(0.1) * 5},
                           DnsParams(), now=6) == []


def test_dns_params_validation():
    with pytest.raises(ValueError):
        DnsParams(window=0)
    with pytest.raises(ValueError):
        DnsParams(low_watermark=0.8, high_watermark=0.3)
    with pytest.raises(ValueError):
        DnsParams(step=0.0)


# -- context mapping ----------------------------------------------------------

def ctx(ue_id, zone="downtown", mobility=Mobility.STATIONARY):
    return UserContext(ue_id=ue_id, location_zone=zone, mobility=mobility,
                       availability=Availability.AVAILABLE)


def test_class_for_precedence():
    assert TABLE.class_for(ctx("u", zone="zone-7", mobility=Mobility.MOBILE)) \
        == CRITICAL_CLASS
    assert TABLE.class_for(ctx("u", mobility=Mobility.MOBILE)) == MOBILE_CLASS
    assert TABLE.class_for(ctx("u")) == DEFAULT_CLASS


def step(contexts, ue_states, current, slices=None, pending=None):
    return context_policy_step(contexts, TABLE, ue_states, current,
                               slices or {}, pending or {}, CAL, 0.10, now=9)


def test_context_match_is_quiet():
    requests, actions = step({"u1": ctx("u1")}, {"u1": mk_state("u1")},
                             {"u1": "s1"})
    assert requests == [] and actions == []


def test_context_zone_triggers_switch_request():
    requests, _ = step({"u1": ctx("u1", zone="zone-7")},
                       {"u1": mk_state("u1")}, {"u1": "s1"})
    assert requests == [SwitchRequest(ue_id="u1", from_slice="s1",
                                      to_class=CRITICAL_CLASS, issued_at=9)]


def test_context_mobility_triggers_switch_request():
    requests, _ = step({"u1": ctx("u1", mobility=Mobility.MOBILE)},
                       {"u1": mk_state("u1")}, {"u1": "s1"})
    assert requests[0].to_class == MOBILE_CLASS


def test_registered_ue_without_context_row_is_an_error():
    with pytest.raises(MissingContext) as info:
        step({}, {"u1": mk_state("u1")}, {"u1": "s1"})
    assert info.value.ue_id == "u1"


def test_unregistered_ue_without_context_row_is_skipped():
    requests, actions = step({}, {"u1": mk_state("u1")}, {"u1": None})
    assert requests == [] and actions == []


def test_context_debounce_keeps_pending_request():
    pending = SwitchRequest(ue_id="u1", from_slice="s1",
                            to_class=CRITICAL_CLASS, issued_at=2)
    requests, _ = step({"u1": ctx("u1", zone="zone-7")},
                       {"u1": mk_state("u1")}, {"u1": "s1"},
                       pending={"u1": pending})
    assert requests == [pending] and requests[0] is pending


def test_context_pending_superseded_when_mapping_changes():
    pending = SwitchRequest(ue_id="u1", from_slice="s1",
                            to_class=CRITICAL_CLASS, issued_at=2)
    requests, _ = step({"u1": ctx("u1", mobility=Mobility.MOBILE)},
                       {"u1": mk_state("u1")}, {"u1": "s1"},
                       pending={"u1": pending})
    assert requests[0].to_class == MOBILE_CLASS
    assert requests[0].issued_at == 9


def test_context_policy_never_reads_semantic_state():
    contexts = {"u1": ctx("u1", zone="zone-7")}
    current = {"u1": "s1"}
    slices = {"s1": mk_slice(members=("u1",))}
    quiet = {"u1": mk_state("u1")}
    excited = {"u1": replace(mk_state("u1"), identified_class=MOBILE_CLASS,
                             last_tasks=frozenset({"anything"}))}
    assert step(contexts, quiet, current, slices) \
        == step(contexts, excited, current, slices)


def test_context_tracks_member_driven_demand():
    slc = mk_slice(members=("u1", "u2"))  # allocation still sized for one
    requests, actions = step({"u1": ctx("u1"), "u2": ctx("u2")},
                             {"u1": mk_state("u1"), "u2": mk_state("u2")},
                             {"u1": "s1", "u2": "s1"}, slices={"s1": slc})
    assert requests == []
    assert [(a.slice_id, a.target) for a in actions] \
        == [("s1", quantify(DEFAULT_CLASS.qos, CAL, 2))]


# -- policy names -------------------------------------------------------------

def test_policy_kind_parse_round_trip():
    for kind in PolicyKind:
        assert PolicyKind.parse(kind.value) is kind
    with pytest.raises(ValueError):
        PolicyKind.parse("adaptive")
