"""Three-stage retrieval episodes: localize, retrieve, verify.

An episode localizes a word node (stage I), retrieves every context part
with the context cue, then works through the strategy schedule on the
target part: series of retrieve/compare attempts (stages II-III) under a
repetition limit, optional re-localization, and the bookkeeping of
feeling-of-knowing, resolution and timing.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Union

import numpy as np

from .curvelab import CueSpec, NoiseModel, draw_cue_inputs
from .errors import ConfigurationError
from .netcore import BipolarVector, SynapticMatrix, TieRule, decode_batch, train_hebbian


logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 20
DEFAULT_ARMS_THRESHOLD = 50


class EventType(enum.Enum):
    LOCALIZED_STAGE = "LocalizedStage"
    PART_RECALLED = "PartRecalled"
    PART_MISSED = "PartMissed"
    ATTEMPT_FAILED = "AttemptFailed"
    SERIES_EXHAUSTED = "SeriesExhausted"
    FOK_FELT = "FOKFelt"
    RELOCALIZED = "Relocalized"
    RESOLVED = "Resolved"
    THROW_UP_ARMS = "ThrowUpArms"
    GAVE_UP = "GaveUp"


@dataclass(frozen=True)
class ComponentNet:
    """One autoassociative network of a word node and the pattern it stores."""

    matrix: SynapticMatrix
    pattern: BipolarVector

    def __post_init__(self):
        if self.matrix.n != self.pattern.n:
            raise ConfigurationError(
                f"pattern length {self.pattern.n} does not match network size {self.matrix.n}"
            )

    @classmethod
    def trained(cls, pattern: BipolarVector) -> "ComponentNet":
        return cls(train_hebbian(pattern), pattern)

    def to_json(self) -> dict:
        return {"pattern": self.pattern.to_json(), "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ComponentNet":
        if not isinstance(data, dict) or "pattern" not in data:
            raise ConfigurationError("a network entry needs a 'pattern'")
        pattern = BipolarVector.from_json(data["pattern"])
        if "matrix" in data:
            return cls(SynapticMatrix.from_json(data["matrix"]), pattern)
        return cls.trained(pattern)


@dataclass(frozen=True)
class WordNode:
    id: str
    parts: Mapping[str, ComponentNet]

    def __post_init__(self):
        if not self.parts:
            raise ConfigurationError(f"word node {self.id!r} needs at least one part")
        sizes = {part.matrix.n for part in self.parts.values()}
        if len(sizes) != 1:
            raise ConfigurationError(f"parts of word node {self.id!r} differ in size: {sorted(sizes)}")

    @property
    def n(self) -> int:
        return next(iter(self.parts.values())).matrix.n


@dataclass(frozen=True)
class MetaMemory:
    references: Mapping[str, BipolarVector]

    def check(self, n: int) -> None:
        for name, reference in self.references.items():
            if reference.n != n:
                raise ConfigurationError(
                    f"reference for {name!r} has length {reference.n}, expected {n}"
                )


@dataclass(frozen=True)
class LocalizationErrors:
    """Parts whose network is wrongly selected, with the decoys they bind to."""

    mislocalize: frozenset[str] = frozenset()
    decoys: Mapping[str, tuple[SynapticMatrix, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "mislocalize", frozenset(self.mislocalize))
        for part in self.mislocalize:
            if not self.decoys.get(part):
                raise ConfigurationError(f"mislocalized part {part!r} has no decoy network")

    def without(self, parts: frozenset[str] | None) -> "LocalizationErrors":
        if parts is None:
            return LocalizationErrors(frozenset(), self.decoys)
        return LocalizationErrors(self.mislocalize - parts, self.decoys)


@dataclass(frozen=True)
class Localization:
    selected: Mapping[str, SynapticMatrix]
    mislocalized: frozenset[str]
    fok: bool


@dataclass(frozen=True)
class SeriesConfig:
    limit: int = DEFAULT_LIMIT
    cue: CueSpec = CueSpec(0)
    tie: TieRule = TieRule.RETAIN_INPUT

    def __post_init__(self):
        if self.limit < 1:
            raise ConfigurationError(f"repetition limit must be at least 1, got {self.limit}")
        object.__setattr__(self, "tie", TieRule.parse(self.tie))


@dataclass(frozen=True)
class Persist:
    """Keep retrieving under the same cue; repeats only while FOK is felt."""

    cue: CueSpec
    series: int = 3
    kind = "persist"

    def to_json(self) -> dict:
        return {"kind": self.kind, "cue": self.cue.to_json(), "series": self.series}


@dataclass(frozen=True)
class FreeRecall:
    series: int = 3
    kind = "free_recall"

    def to_json(self) -> dict:
        return {"kind": self.kind, "series": self.series}


@dataclass(frozen=True)
class Relocalize:
    """Restart from stage I with corrected errors, then retrieve with a new cue.

    ``corrects`` names the parts whose mislocalization is fixed; None fixes all.
    """

    cue: CueSpec
    series: int = 1
    corrects: frozenset[str] | None = None
    kind = "relocalize"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cue": self.cue.to_json(),
            "series": self.series,
            "corrects": None if self.corrects is None else sorted(self.corrects),
        }


Phase = Union[Persist, FreeRecall, Relocalize]


def phase_from_json(data: dict) -> Phase:
    if not isinstance(data, dict):
        raise ConfigurationError("a phase must be a JSON object")
    kind = data.get("kind")
    series = data.get("series")
    if kind == "persist":
        return Persist(CueSpec.from_json(data["cue"]), series if series is not None else 3)
    if kind == "free_recall":
        return FreeRecall(series if series is not None else 3)
    if kind == "relocalize":
        corrects = data.get("corrects")
        return Relocalize(
            CueSpec.from_json(data["cue"]),
            series if series is not None else 1,
            None if corrects is None else frozenset(corrects),
        )
    raise ConfigurationError(f"unknown phase kind {kind!r}")


@dataclass(frozen=True)
class Strategy:
    schedule: tuple[Phase, ...]
    give_up_after: int = 500

    def __post_init__(self):
        object.__setattr__(self, "schedule", tuple(self.schedule))
        if not self.schedule:
            raise ConfigurationError("a strategy needs at least one phase")
        if self.give_up_after < 1:
            raise ConfigurationError(f"give_up_after must be at least 1, got {self.give_up_after}")
        for phase in self.schedule:
            if phase.series < 1:
                raise ConfigurationError(f"a {phase.kind} phase needs at least one series")

    def to_json(self) -> dict:
        return {
            "schedule": [phase.to_json() for phase in self.schedule],
            "give_up_after": self.give_up_after,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Strategy":
        if not isinstance(data, dict) or "schedule" not in data:
            raise ConfigurationError("strategy JSON must be an object with 'schedule'")
        return cls(
            tuple(phase_from_json(p) for p in data["schedule"]),
            data.get("give_up_after", 500),
        )


@dataclass(frozen=True)
class TimingModel:
    """Durations in whole milliseconds."""

    t_localize: int = 400
    t_attempt: int = 120
    t_decision: int = 80
    t_pulse: int = 30

    def __post_init__(self):
        for name in ("t_localize", "t_attempt", "t_decision", "t_pulse"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ConfigurationError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def per_attempt(self) -> int:
        return self.t_pulse + self.t_attempt + self.t_decision

    def to_json(self) -> dict:
        return {
            "t_localize": self.t_localize,
            "t_attempt": self.t_attempt,
            "t_decision": self.t_decision,
            "t_pulse": self.t_pulse,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TimingModel":
        if not isinstance(data, dict):
            raise ConfigurationError("timing JSON must be an object")
        return cls(**{k: data[k] for k in ("t_localize", "t_attempt", "t_decision", "t_pulse") if k in data})


@dataclass(frozen=True)
class TraceEvent:
    type: EventType
    t_ms: int
    phase_index: int | None = None
    attempt_index: int | None = None
    part: str | None = None
    fok: bool | None = None

    def to_json(self) -> dict:
        data = {
            "type": self.type.value,
            "t_ms": self.t_ms,
            "phase_index": self.phase_index,
            "attempt_index": self.attempt_index,
        }
        if self.part is not None:
            data["part"] = self.part
        if self.fok is not None:
            data["fok"] = self.fok
        return data

    @classmethod
    def from_json(cls, data: dict) -> "TraceEvent":
        return cls(
            EventType(data["type"]),
            data["t_ms"],
            data.get("phase_index"),
            data.get("attempt_index"),
            data.get("part"),
            data.get("fok"),
        )


@dataclass(frozen=True)
class EpisodeTrace:
    events: tuple[TraceEvent, ...]
    attempts_per_phase: tuple[int, ...]
    context_attempts: int
    localizations: int
    total_time_ms: int
    timing: TimingModel

    @property
    def n_attempts(self) -> int:
        return self.context_attempts + sum(self.attempts_per_phase)

    def of_type(self, kind: EventType) -> list[TraceEvent]:
        return [e for e in self.events if e.type is kind]

    @property
    def resolved(self) -> bool:
        return bool(self.of_type(EventType.RESOLVED))

    @property
    def gave_up(self) -> bool:
        return bool(self.of_type(EventType.GAVE_UP))

    def expected_total_time(self) -> int:
        return (
            self.localizations * self.timing.t_localize
            + self.n_attempts * self.timing.per_attempt
        )

    def to_json(self) -> dict:
        return {
            "events": [e.to_json() for e in self.events],
            "counters": {
                "attempts_per_phase": list(self.attempts_per_phase),
                "context_attempts": self.context_attempts,
                "localizations": self.localizations,
            },
            "timing": self.timing.to_json(),
            "total_time_ms": self.total_time_ms,
            "outcome": "resolved" if self.resolved else "gave_up",
        }

    @classmethod
    def from_json(cls, data: dict) -> "EpisodeTrace":
        counters = data["counters"]
        return cls(
            events=tuple(TraceEvent.from_json(e) for e in data["events"]),
            attempts_per_phase=tuple(counters["attempts_per_phase"]),
            context_attempts=counters["context_attempts"],
            localizations=counters["localizations"],
            total_time_ms=data["total_time_ms"],
            timing=TimingModel.from_json(data["timing"]),
        )


class SeriesOutcome(NamedTuple):
    resolved: bool
    attempts_used: int


def localize(
    node: WordNode,
    meta: MetaMemory,
    errors: LocalizationErrors,
    rng: np.random.Generator,
    target: str | None = None,
) -> Localization:
    """Stage I: select a network for every part and look up the references.

    FOK is set when the target's reference is present in metamemory (every
    part's reference when no target is named).
    """
    unknown = errors.mislocalize - set(node.parts)
    if unknown:
        raise ConfigurationError(f"unknown part(s) in localization errors: {sorted(unknown)}")
    if target is not None and target not in node.parts:
        raise ConfigurationError(f"unknown target part {target!r}")

    selected = {}
    for name, part in node.parts.items():
        if name in errors.mislocalize:
            decoys = errors.decoys[name]
            decoy = decoys[int(rng.integers(len(decoys)))] if len(decoys) > 1 else decoys[0]
            if decoy.n != node.n:
                raise ConfigurationError(f"decoy for {name!r} has size {decoy.n}, expected {node.n}")
            selected[name] = decoy
        else:
            selected[name] = part.matrix

    if target is not None:
        fok = target in meta.references
    else:
        fok = all(name in meta.references for name in node.parts)
    return Localization(selected, frozenset(errors.mislocalize), fok)


def attempt(
    net: SynapticMatrix,
    reference: BipolarVector,
    cue: CueSpec,
    tie: TieRule,
    rng: np.random.Generator,
) -> bool:
    """Stages II-III once: draw a cue input, decode it, compare with the reference."""
    if net.n != reference.n:
        raise ConfigurationError(
            f"reference length {reference.n} does not match network size {net.n}"
        )
    inputs = draw_cue_inputs(reference, cue, rng, 1)
    output = decode_batch(net, inputs, tie)[0]
    return bool(np.array_equal(output, reference.array))


def run_series(
    loc: Localization,
    part: str,
    reference: BipolarVector,
    cfg: SeriesConfig,
    rng: np.random.Generator,
    on_attempt: Callable[[bool], None] | None = None,
) -> SeriesOutcome:
    try:
        net = loc.selected[part]
    except KeyError:
        raise ConfigurationError(f"part {part!r} was not localized") from None

    for used in range(1, cfg.limit + 1):
        ok = attempt(net, reference, cfg.cue, cfg.tie, rng)
        if on_attempt:
            on_attempt(ok)
        if ok:
            return SeriesOutcome(True, used)
    return SeriesOutcome(False, cfg.limit)


def run_episode(
    node: WordNode,
    meta: MetaMemory,
    strategy: Strategy,
    series: SeriesConfig,
    timing: TimingModel,
    rng: np.random.Generator,
    *,
    target: str,
    errors: LocalizationErrors | None = None,
    context_cue: CueSpec | None = None,
    arms_threshold: int = DEFAULT_ARMS_THRESHOLD,
    on_event: Callable[[TraceEvent], None] | None = None,
) -> EpisodeTrace:
    if target not in node.parts:
        raise ConfigurationError(f"unknown target part {target!r}")
    meta.check(node.n)
    errors = errors or LocalizationErrors()
    context_cue = context_cue or CueSpec(0)

    events: list[TraceEvent] = []
    clock = 0
    localizations = 0
    context_attempts = 0
    attempts_per_phase = [0] * len(strategy.schedule)
    target_attempts = 0
    exhausted_series = 0
    relocalized_pending = False

    def emit(kind, phase_index=None, attempt_index=None, part=None, fok=None):
        event = TraceEvent(kind, clock, phase_index, attempt_index, part, fok)
        events.append(event)
        if on_event:
            on_event(event)
        else:
            logger.debug("%s t=%dms phase=%s attempt=%s", kind.value, clock, phase_index, attempt_index)

    def reference_for(part):
        # without a metamemory trace the comparison falls back to the stored pattern
        return meta.references.get(part, node.parts[part].pattern)

    loc = localize(node, meta, errors, rng, target=target)
    localizations += 1
    clock += timing.t_localize
    emit(EventType.LOCALIZED_STAGE, fok=loc.fok)

    for part in node.parts:
        if part == target:
            continue

        def count_context(ok):
            nonlocal clock, context_attempts
            context_attempts += 1
            clock += timing.per_attempt

        outcome = run_series(
            loc, part, reference_for(part),
            SeriesConfig(series.limit, context_cue, series.tie), rng, count_context,
        )
        emit(
            EventType.PART_RECALLED if outcome.resolved else EventType.PART_MISSED,
            attempt_index=outcome.attempts_used,
            part=part,
        )

    reference = reference_for(target)
    resolved = gave_up = False

    for phase_index, phase in enumerate(strategy.schedule):
        if isinstance(phase, Relocalize):
            errors = errors.without(phase.corrects)
            loc = localize(node, meta, errors, rng, target=target)
            localizations += 1
            clock += timing.t_localize
            emit(EventType.RELOCALIZED, phase_index, fok=loc.fok)
            relocalized_pending = True

        cue = phase.cue if not isinstance(phase, FreeRecall) else CueSpec(node.n, NoiseModel.REPLACEMENT)

        for series_index in range(phase.series):
            if isinstance(phase, Persist) and series_index > 0 and not loc.fok:
                break
            remaining = strategy.give_up_after - target_attempts
            if remaining <= 0:
                gave_up = True
                break
            limit = min(series.limit, remaining)

            def count_target(ok, phase_index=phase_index):
                nonlocal clock, target_attempts, relocalized_pending
                target_attempts += 1
                attempts_per_phase[phase_index] += 1
                clock += timing.per_attempt
                if ok:
                    emit(EventType.RESOLVED, phase_index, target_attempts, part=target)
                    if relocalized_pending and target_attempts - 1 >= arms_threshold:
                        emit(EventType.THROW_UP_ARMS, phase_index, target_attempts, part=target)
                else:
                    emit(EventType.ATTEMPT_FAILED, phase_index, target_attempts, part=target)
                relocalized_pending = False

            outcome = run_series(
                loc, target, reference, SeriesConfig(limit, cue, series.tie), rng, count_target
            )
            if outcome.resolved:
                resolved = True
                break
            if limit < series.limit:
                gave_up = True
                break
            exhausted_series += 1
            emit(EventType.SERIES_EXHAUSTED, phase_index, target_attempts, part=target)
            if exhausted_series == 1 and loc.fok:
                emit(EventType.FOK_FELT, phase_index, target_attempts, part=target)

        if resolved or gave_up:
            break

    if not resolved:
        emit(EventType.GAVE_UP, attempt_index=target_attempts, part=target)

    trace = EpisodeTrace(
        events=tuple(events),
        attempts_per_phase=tuple(attempts_per_phase),
        context_attempts=context_attempts,
        localizations=localizations,
        total_time_ms=clock,
        timing=timing,
    )
    logger.info(
        "Episode for %r: %s after %d target attempts, %d ms",
        target, "resolved" if resolved else "gave up", target_attempts, clock,
    )
    return trace
