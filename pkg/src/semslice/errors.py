"""Exception types shared across the simulator."""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all simulator errors."""


class UnknownLabel(SimulationError):
    def __init__(self, label: str, event_index: int | None = None):
        self.label = label
        self.event_index = event_index
        suffix = f" (event #{event_index})" if event_index is not None else ""
        super().__init__(f"label not in dictionary vocabulary: {label!r}{suffix}")


class TimeRegression(SimulationError):
    def __init__(self, stream_id: str, last_time: int, event_time: int,
                 event_index: int | None = None):
        self.stream_id = stream_id
        self.last_time = last_time
        self.event_time = event_time
        self.event_index = event_index
        super().__init__(
            f"stream {stream_id!r} went back in time: {event_time} < {last_time}"
        )


class DuplicateRuleId(SimulationError):
    def __init__(self, rule_id: str):
        self.rule_id = rule_id
        super().__init__(f"rule id already present: {rule_id!r}")


class InvalidRho(SimulationError):
    def __init__(self, rho: float):
        self.rho = rho
        super().__init__(f"compression ratio must be in (0, 1], got {rho}")


class CapacityExceeded(SimulationError):
    """A reservation would overrun a pool domain; nothing was committed."""

    def __init__(self, domain: str, requested: float, free: float):
        self.domain = domain
        self.requested = requested
        self.free = free
        super().__init__(
            f"capacity exceeded in {domain}: requested {requested:g}, free {free:g}"
        )


class ReleaseUnderflow(SimulationError):
    def __init__(self, field: str, delta: float, held: float):
        self.field = field
        super().__init__(
            f"release of {delta:g} {field} exceeds held amount {held:g}"
        )


class SlaFloor(SimulationError):
    """Release would drop an occupied slice below its SLA floor."""

    def __init__(self, slice_id: str, metric: str):
        self.slice_id = slice_id
        self.metric = metric
        super().__init__(f"slice {slice_id}: release breaches SLA floor on {metric}")


class MissingContext(SimulationError):
    def __init__(self, ue_id: str):
        self.ue_id = ue_id
        super().__init__(f"no context row for UE {ue_id!r}")


class ScenarioParseError(SimulationError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"scenario parse error{where}: {message}")


class ScenarioValidationError(SimulationError):
    """Carries every validation failure, each with a document location."""

    def __init__(self, issues: list[tuple[str, str]]):
        self.issues = issues
        lines = "; ".join(f"{loc}: {msg}" for loc, msg in issues)
        super().__init__(f"invalid scenario: {lines}")


class InvalidParams(SimulationError):
    pass


class SinkUnavailable(SimulationError):
    def __init__(self, path: str, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"cannot write {path}: {cause}")
