"""Semantic representation pipeline.

Raw stream events become timestamped triples in a knowledge graph; an
ordered rulebook of conjunctive triple patterns turns the live graph into
the set of computational tasks it implies.  Everything here is an immutable
value; operations return new graphs.

Template syntax (also used in scenario files): three whitespace-separated
tokens ``subject predicate object`` where ``?name`` binds a variable,
``*`` matches anything and any other token is a vocabulary constant.
A variable may recur across templates of one pattern (join semantics).
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, replace
from functools import cached_property

from semslice import _kernel
from semslice.catalog import TaskKind
from semslice.errors import DuplicateRuleId, TimeRegression, UnknownLabel

PERSISTENT = None  # ttl sentinel: the fact never expires
_WILDCARD = -1


@dataclass(frozen=True)
class SemanticEvent:
    """One fact reported by a stream at a given tick."""

    stream_id: str
    time: int
    triple: tuple[str, str, str]
    ttl: int | None = 20

    def __post_init__(self) -> None:
        if self.time < 0:
            raise ValueError(f"event time must be non-negative: {self.time}")
        if self.ttl is not None and self.ttl <= 0:
            raise ValueError(f"ttl must be positive or persistent: {self.ttl}")
        if any(not part for part in self.triple):
            raise ValueError("triple labels must be non-empty")


@dataclass(frozen=True)
class TripleRecord:
    subject: str
    predicate: str
    object: str
    inserted_at: int
    expires_at: int | None  # None = persistent

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, self.object)

    def live_at(self, now: int) -> bool:
        return self.expires_at is None or self.expires_at > now


@dataclass(frozen=True)
class KnowledgeGraph:
    """Timestamped triple store with per-stream monotonic clocks.

    ``triples`` is kept sorted by (subject, predicate, object) so equal
    graphs compare equal regardless of insertion order.
    """

    triples: tuple[TripleRecord, ...] = ()
    stream_clocks: tuple[tuple[str, int], ...] = ()

    @property
    def entities(self) -> frozenset[str]:
        """Labels appearing as subject or object of a stored triple."""
        out: set[str] = set()
        for record in self.triples:
            out.add(record.subject)
            out.add(record.object)
        return frozenset(out)

    def live_triples(self, now: int) -> tuple[TripleRecord, ...]:
        return tuple(r for r in self.triples if r.live_at(now))

    def clock_of(self, stream_id: str) -> int | None:
        for sid, t in self.stream_clocks:
            if sid == stream_id:
                return t
        return None


def _token_is_var(token: str) -> bool:
    return token.startswith("?") and len(token) > 1


@dataclass(frozen=True)
class TripleTemplate:
    """One pattern line; positions hold raw tokens."""

    subject: str
    predicate: str
    object: str

    @classmethod
    def parse(cls, text: str) -> "TripleTemplate":
        tokens = text.split()
        if len(tokens) != 3:
            raise ValueError(f"template needs exactly 3 tokens: {text!r}")
        return cls(*tokens)

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object}"

    def tokens(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, self.object)

    def constants(self) -> tuple[str, ...]:
        return tuple(
            t for t in self.tokens() if t != "*" and not _token_is_var(t)
        )


@dataclass(frozen=True)
class ExtractionRule:
    """Conjunctive pattern; emits ``task`` when some assignment satisfies it.

    ``critical`` marks rules whose match signals an ongoing incident to the
    provisioning layer.
    """

    id: str
    pattern: tuple[TripleTemplate, ...]
    task: TaskKind
    critical: bool = False

    def __post_init__(self) -> None:
        if not self.pattern:
            raise ValueError(f"rule {self.id}: pattern must be non-empty")

    def constants(self) -> tuple[str, ...]:
        return tuple(c for tpl in self.pattern for c in tpl.constants())


def rule(rule_id: str, templates: list[str] | tuple[str, ...], task: TaskKind,
         critical: bool = False) -> ExtractionRule:
    """Convenience constructor from template strings."""
    return ExtractionRule(
        id=rule_id,
        pattern=tuple(TripleTemplate.parse(t) for t in templates),
        task=task,
        critical=critical,
    )


@dataclass(frozen=True)
class Dictionary:
    """Shared vocabulary plus the ordered extraction rulebook."""

    vocabulary: frozenset[str]
    rules: tuple[ExtractionRule, ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for r in self.rules:
            if r.id in seen:
                raise DuplicateRuleId(r.id)
            seen.add(r.id)
            for label in r.constants():
                if label not in self.vocabulary:
                    raise ValueError(
                        f"rule {r.id}: label {label!r} not in vocabulary"
                    )

    @cached_property
    def _compiled(self) -> "_CompiledRulebook":
        return _compile_rulebook(self)


@dataclass(frozen=True)
class _CompiledRulebook:
    """Interned form consumed by the matcher backends."""

    label_ids: dict[str, int]
    terms: array
    offsets: array
    nvars: array


def _compile_rulebook(dictionary: Dictionary) -> _CompiledRulebook:
    label_ids = {label: i for i, label in enumerate(sorted(dictionary.vocabulary))}
    terms: list[int] = []
    offsets: list[int] = [0]
    nvars: list[int] = []
    for r in dictionary.rules:
        var_ids: dict[str, int] = {}
        for tpl in r.pattern:
            for token in tpl.tokens():
                if token == "*":
                    terms.append(_WILDCARD)
                elif _token_is_var(token):
                    var = var_ids.setdefault(token, len(var_ids))
                    terms.append(-2 - var)
                else:
                    terms.append(label_ids[token])
        offsets.append(offsets[-1] + len(r.pattern))
        nvars.append(len(var_ids))
        if len(var_ids) > 64:
            raise ValueError(f"rule {r.id}: too many variables")
    return _CompiledRulebook(
        label_ids=label_ids,
        terms=array("i", terms),
        offsets=array("i", offsets),
        nvars=array("i", nvars),
    )


def _check_labels(event: SemanticEvent, dictionary: Dictionary) -> None:
    for label in event.triple:
        if label not in dictionary.vocabulary:
            raise UnknownLabel(label)


def sweep(kg: KnowledgeGraph, now: int) -> KnowledgeGraph:
    """Drop every triple whose expiry tick has been reached."""
    live = kg.live_triples(now)
    if len(live) == len(kg.triples):
        return kg
    return replace(kg, triples=live)


def ingest_event(kg: KnowledgeGraph, event: SemanticEvent,
                 dictionary: Dictionary, now: int) -> KnowledgeGraph:
    """Insert one event into the graph and sweep expired facts.

    Re-inserting an existing triple refreshes its expiry.  The event's
    labels must be in the dictionary vocabulary and its timestamp must not
    precede anything already seen on the same stream.
    """
    if event.time > now:
        raise ValueError(f"event at t={event.time} ingested in the past (now={now})")
    _check_labels(event, dictionary)
    last = kg.clock_of(event.stream_id)
    if last is not None and event.time < last:
        raise TimeRegression(event.stream_id, last, event.time)

    expires = None if event.ttl is PERSISTENT else now + event.ttl
    record = TripleRecord(*event.triple, inserted_at=now, expires_at=expires)
    kept = [r for r in kg.triples if r.key != record.key and r.live_at(now)]
    kept.append(record)
    kept.sort(key=lambda r: r.key)

    clocks = dict(kg.stream_clocks)
    clocks[event.stream_id] = max(last if last is not None else event.time,
                                  event.time)
    return KnowledgeGraph(
        triples=tuple(kept),
        stream_clocks=tuple(sorted(clocks.items())),
    )


def encode_window(events: list[SemanticEvent], dictionary: Dictionary,
                  now: int) -> KnowledgeGraph:
    """Fold a whole event window into a fresh graph, swept to ``now``.

    Equivalent to ingesting each event at its own timestamp; errors carry
    the index of the offending event.
    """
    kg = KnowledgeGraph()
    for index, event in enumerate(events):
        try:
            kg = ingest_event(kg, event, dictionary, now=event.time)
        except (UnknownLabel, TimeRegression) as err:
            err.event_index = index
            raise
    return sweep(kg, now)


def matching_rules(kg: KnowledgeGraph, dictionary: Dictionary,
                   now: int) -> tuple[ExtractionRule, ...]:
    """Rules whose pattern has at least one satisfying assignment."""
    live = kg.live_triples(now)
    if not live or not dictionary.rules:
        return ()
    compiled = dictionary._compiled
    ids = dict(compiled.label_ids)
    flat: list[int] = []
    for record in live:
        for label in record.key:
            flat.append(ids.setdefault(label, len(ids)))
    hits = _kernel.match_rules(
        array("i", flat), len(live),
        compiled.terms, compiled.offsets, compiled.nvars,
    )
    return tuple(r for r, hit in zip(dictionary.rules, hits) if hit)


def extract_tasks(kg: KnowledgeGraph, dictionary: Dictionary,
                  now: int) -> frozenset[TaskKind]:
    """Tasks implied by the live graph under the rulebook (pure, total)."""
    return frozenset(r.task for r in matching_rules(kg, dictionary, now))


def update_dictionary(dictionary: Dictionary,
                      new_rule: ExtractionRule) -> Dictionary:
    """Append one rule, growing the vocabulary by its fresh labels."""
    if any(r.id == new_rule.id for r in dictionary.rules):
        raise DuplicateRuleId(new_rule.id)
    vocabulary = dictionary.vocabulary | set(new_rule.constants())
    return Dictionary(vocabulary=vocabulary, rules=dictionary.rules + (new_rule,))


#: Rulebook shipped with the first-responder scenario.
DEFAULT_RULEBOOK: tuple[ExtractionRule, ...] = (
    rule("r1", ["?c observes ?x"], TaskKind.CONTINUOUS_MONITORING),
    rule("r2", ["?a hits ?b"], TaskKind.EVENT_DETECTION, critical=True),
    rule("r3", ["?a hits ?b", "?p injured_in ?e"], TaskKind.ALERT_NOTIFICATION,
         critical=True),
    rule("r4", ["?p injured_in ?e"], TaskKind.TELE_HEALTH),
    rule("r5", ["?v catches fire"], TaskKind.ALERT_NOTIFICATION, critical=True),
    rule("r6", ["?f extinguishes fire"], TaskKind.REMOTE_CONTROL),
    rule("r7", ["?u tracks ?s"], TaskKind.TRACKING_OBJECT_OF_INTEREST),
    rule("r8", ["?u speaks_on ptt_channel"], TaskKind.PUSH_TO_TALK),
    rule("r9", ["ambulance dispatched_to ?e"], TaskKind.SMART_AMBULANCE),
    rule("r10", ["?c detects ?o"], TaskKind.OBJECT_DETECTION),
)

#: Entity labels used by the built-in scenario beyond the rulebook constants.
SCENARIO_LABELS = frozenset(
    {
        "camera", "road", "officer", "monitors", "bus", "car", "driver",
        "accident", "suspect", "firetruck", "medic_cam", "injury",
        "police_unit", "fire_unit", "medic_unit",
    }
)


def default_dictionary(extra_vocabulary: frozenset[str] | set[str] = frozenset(),
                       rules: tuple[ExtractionRule, ...] = DEFAULT_RULEBOOK,
                       ) -> Dictionary:
    vocabulary = set(SCENARIO_LABELS) | set(extra_vocabulary)
    for r in rules:
        vocabulary.update(r.constants())
    return Dictionary(vocabulary=frozenset(vocabulary), rules=rules)
