"""Canonical retrieval episodes with an expected event signature.

The ``chekhov`` profile replays a prolonged tip-of-the-tongue state: the
surname's phonological network is mislocalized, so neither persistence
under a semantic cue nor free recall can succeed; a fresh localization
with a near-exact cue resolves it on the next attempt, after a long
enough struggle to trigger the throw-up-arms reaction.

The ``short_tot`` profile is the contrast: the right network is selected
but carries dead inputs from the demo TOT class, so a partial cue fails
now and then and persistence resolves it within one series.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import EpisodeConfig
from .curvelab import CueSpec, DemoConfiguration
from .errors import ConfigurationError, ScenarioSignatureError
from .netcore import BipolarVector, DamageSpec, TieRule, apply_damage, train_hebbian
from .resources import read_json_resource
from .retrieval import (
    ComponentNet,
    EpisodeTrace,
    EventType,
    FreeRecall,
    LocalizationErrors,
    MetaMemory,
    Persist,
    Relocalize,
    SeriesConfig,
    Strategy,
    TimingModel,
    TraceEvent,
    WordNode,
)


logger = logging.getLogger(__name__)

STAGE_LABELS = ("I", "IIa", "IIb", "IIc", "IId", "III")

STAGE_TITLES = {
    "I": "localization of the word node",
    "IIa": "facts about the owner recalled",
    "IIb": "persistent recall with the semantic cue",
    "IIc": "free recall",
    "IId": "recall with a new semantic cue",
    "III": "comparison with the reference and decision",
}


@dataclass(frozen=True)
class ScenarioConfig(EpisodeConfig):
    seed: int = 0


@dataclass(frozen=True)
class ChekhovConfig(ScenarioConfig):
    pass


@dataclass(frozen=True)
class NarrativeRow:
    stage: str
    title: str
    events: tuple[TraceEvent, ...]

    def summary(self) -> str:
        names = []
        for event in self.events:
            if not names or names[-1][0] != event.type.value:
                names.append([event.type.value, 1])
            else:
                names[-1][1] += 1
        return ", ".join(name if count == 1 else f"{name} x{count}" for name, count in names)


def render_narrative(rows: list[NarrativeRow], title: str | None = None) -> str:
    lines = [title] if title else []
    lines += [f"{'stage':<6} {'description':<44} events", "-" * 78]
    for row in rows:
        lines.append(f"{row.stage:<6} {row.title:<44} {row.summary()}")
    return "\n".join(lines) + "\n"


# Nine-unit patterns for the three parts and the unrelated pattern
# held by the wrongly selected phonological network.
_SEMANTIC = (1, 1, -1, 1, -1, -1, 1, 1, -1)
_EPISODIC = (-1, 1, 1, -1, 1, -1, -1, 1, 1)
_PHONOLOGICAL = (1, -1, 1, 1, -1, 1, -1, -1, 1)
_DECOY = (1, 1, 1, -1, -1, 1, 1, -1, -1)

# A dead-input set whose curve falls in the demo network's TOT class.
_TOT_DEAD_INPUTS = frozenset({0, 4, 5, 6})


def chekhov_config() -> ChekhovConfig:
    parts = {
        "semantic": ComponentNet.trained(BipolarVector(_SEMANTIC)),
        "episodic": ComponentNet.trained(BipolarVector(_EPISODIC)),
        "phonological": ComponentNet.trained(BipolarVector(_PHONOLOGICAL)),
    }
    node = WordNode("horse_name", parts)
    meta = MetaMemory({name: part.pattern for name, part in parts.items()})
    errors = LocalizationErrors(
        frozenset({"phonological"}),
        {"phonological": (train_hebbian(BipolarVector(_DECOY)),)},
    )
    strategy = Strategy(
        (
            Persist(CueSpec(6), 3),
            FreeRecall(3),
            Relocalize(CueSpec(1), 1, frozenset({"phonological"})),
        ),
        give_up_after=200,
    )
    return ChekhovConfig(
        node=node,
        meta=meta,
        errors=errors,
        strategy=strategy,
        series=SeriesConfig(20, CueSpec(0), TieRule.RETAIN_INPUT),
        timing=TimingModel(),
    )


def _phase_kind(config: ScenarioConfig, event: TraceEvent) -> str | None:
    if event.phase_index is None:
        return None
    return config.strategy.schedule[event.phase_index].kind


def narrative_map(config: ChekhovConfig, trace: EpisodeTrace) -> list[NarrativeRow]:
    """Assign every trace event to its stage row, checking the expected signature."""
    events = list(trace.events)

    def index_of(kind, start=0):
        for i in range(start, len(events)):
            if events[i].type is kind:
                return i
        raise ScenarioSignatureError(f"{kind.value} missing from the episode trace")

    localized = index_of(EventType.LOCALIZED_STAGE)
    if not events[localized].fok:
        raise ScenarioSignatureError("the word node was localized without a feeling of knowing")

    first_exhausted = index_of(EventType.SERIES_EXHAUSTED)
    if _phase_kind(config, events[first_exhausted]) != "persist":
        raise ScenarioSignatureError("the first exhausted series does not belong to the persist phase")
    if first_exhausted + 1 >= len(events) or events[first_exhausted + 1].type is not EventType.FOK_FELT:
        raise ScenarioSignatureError("FOKFelt does not follow the first exhausted series")

    relocalized = index_of(EventType.RELOCALIZED)
    resolved = index_of(EventType.RESOLVED)
    if resolved != relocalized + 1:
        raise ScenarioSignatureError("resolution is not the first attempt after re-localization")
    if any(e.type is EventType.RESOLVED for e in events[:relocalized]):
        raise ScenarioSignatureError("the target was resolved before re-localization")
    arms = index_of(EventType.THROW_UP_ARMS, resolved)
    if arms != resolved + 1:
        raise ScenarioSignatureError("ThrowUpArms does not accompany the resolution")

    context = [e for e in events[:first_exhausted] if e.type is EventType.PART_RECALLED]
    if not context:
        raise ScenarioSignatureError("no context part was recalled before the persist phase")

    free_recall = [
        e for e in events[first_exhausted:relocalized] if _phase_kind(config, e) == "free_recall"
    ]
    if not any(e.type is EventType.SERIES_EXHAUSTED for e in free_recall):
        raise ScenarioSignatureError("free recall left no exhausted series")

    persist = [
        e for e in events[localized + 1:relocalized] if _phase_kind(config, e) == "persist"
    ]
    context_events = [
        e for e in events[localized + 1:]
        if e.type in (EventType.PART_RECALLED, EventType.PART_MISSED)
    ]

    groups = {
        "I": (events[localized],),
        "IIa": tuple(context_events),
        "IIb": tuple(persist),
        "IIc": tuple(free_recall),
        "IId": (events[relocalized], events[resolved]),
        "III": (events[arms],),
    }
    return [NarrativeRow(label, STAGE_TITLES[label], groups[label]) for label in STAGE_LABELS]


def run_chekhov(
    seed: int | None = None,
    on_event: Callable[[TraceEvent], None] | None = None,
) -> tuple[EpisodeTrace, list[NarrativeRow]]:
    config = chekhov_config()
    seed = config.seed if seed is None else seed
    trace = config.run(np.random.default_rng(seed), on_event)
    rows = narrative_map(config, trace)
    logger.info("Chekhov scenario (seed %d): resolved at %d ms", seed, trace.total_time_ms)
    return trace, rows


def short_tot_config() -> ScenarioConfig:
    demo = DemoConfiguration.from_json(read_json_resource("demo_tot.json"))
    damaged = apply_damage(demo.matrix, DamageSpec(dead_inputs=_TOT_DEAD_INPUTS))
    parts = {
        "semantic": ComponentNet.trained(BipolarVector(_SEMANTIC)),
        "phonological": ComponentNet(damaged, demo.reference),
    }
    node = WordNode("damaged_name", parts)
    meta = MetaMemory({name: part.pattern for name, part in parts.items()})
    strategy = Strategy((Persist(CueSpec(3), 3), FreeRecall(3)), give_up_after=200)
    return ScenarioConfig(
        node=node,
        meta=meta,
        strategy=strategy,
        series=SeriesConfig(20, CueSpec(0), TieRule.RETAIN_INPUT),
        timing=TimingModel(),
    )


def short_tot_narrative(config: ScenarioConfig, trace: EpisodeTrace) -> list[NarrativeRow]:
    """Stage rows of a TOT state that persistence resolves within one series."""
    events = list(trace.events)
    if not events or events[0].type is not EventType.LOCALIZED_STAGE or not events[0].fok:
        raise ScenarioSignatureError("the word node was not localized with a feeling of knowing")
    for kind in (
        EventType.SERIES_EXHAUSTED,
        EventType.RELOCALIZED,
        EventType.THROW_UP_ARMS,
        EventType.GAVE_UP,
    ):
        if any(e.type is kind for e in events):
            raise ScenarioSignatureError(f"{kind.value} in a short TOT episode")

    resolved = [e for e in events if e.type is EventType.RESOLVED]
    if len(resolved) != 1 or _phase_kind(config, resolved[0]) != "persist":
        raise ScenarioSignatureError("the target was not resolved by persistence")
    if resolved[0].attempt_index > config.series.limit:
        raise ScenarioSignatureError(
            f"resolution took {resolved[0].attempt_index} attempts, over the limit {config.series.limit}"
        )

    context = tuple(e for e in events if e.type in (EventType.PART_RECALLED, EventType.PART_MISSED))
    if not any(e.type is EventType.PART_RECALLED for e in context):
        raise ScenarioSignatureError("no context part was recalled")

    groups = {
        "I": (events[0],),
        "IIa": context,
        "IIb": tuple(e for e in events if e.type is EventType.ATTEMPT_FAILED),
        "III": (resolved[0],),
    }
    return [
        NarrativeRow(label, STAGE_TITLES[label], groups[label])
        for label in STAGE_LABELS
        if label in groups
    ]


def run_short_tot(
    seed: int | None = None,
    on_event: Callable[[TraceEvent], None] | None = None,
) -> tuple[EpisodeTrace, list[NarrativeRow]]:
    config = short_tot_config()
    seed = config.seed if seed is None else seed
    trace = config.run(np.random.default_rng(seed), on_event)
    rows = short_tot_narrative(config, trace)
    logger.info("Short TOT scenario (seed %d): resolved at %d ms", seed, trace.total_time_ms)
    return trace, rows


@dataclass(frozen=True)
class ScenarioProfile:
    key: str
    display_name: str
    build: Callable[[], ScenarioConfig]
    run: Callable[..., tuple[EpisodeTrace, list[NarrativeRow]]]


SCENARIOS = {
    "chekhov": ScenarioProfile(
        key="chekhov",
        display_name="Horse Name",
        build=chekhov_config,
        run=run_chekhov,
    ),
    "short_tot": ScenarioProfile(
        key="short_tot",
        display_name="Short TOT on a damaged network",
        build=short_tot_config,
        run=run_short_tot,
    ),
}


def get_scenario(name: str) -> ScenarioProfile:
    try:
        return SCENARIOS[name.strip().lower()]
    except KeyError:
        raise ConfigurationError(
            f"unknown scenario {name!r}; expected one of {sorted(SCENARIOS)}"
        ) from None
