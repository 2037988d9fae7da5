import numpy as np
import pytest

from totlab.curvelab import CueSpec
from totlab.errors import ConfigurationError
from totlab.netcore import BipolarVector, train_hebbian
from totlab.retrieval import (
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
    WordNode,
    attempt,
    localize,
    run_episode,
    run_series,
)


SEMANTIC = BipolarVector((1, 1, -1, 1, -1, -1, 1, 1, -1))
DECOY = BipolarVector((1, 1, 1, -1, -1, 1, 1, -1, -1))


@pytest.fixture
def node(x):
    return WordNode(
        "word",
        {"semantic": ComponentNet.trained(SEMANTIC), "phonological": ComponentNet.trained(x)},
    )


@pytest.fixture
def meta(x):
    return MetaMemory({"semantic": SEMANTIC, "phonological": x})


@pytest.fixture
def decoy_errors():
    return LocalizationErrors(frozenset({"phonological"}), {"phonological": (train_hebbian(DECOY),)})


def episode(node, meta, schedule, rng, *, give_up_after=500, limit=20, errors=None, **kwargs):
    return run_episode(
        node, meta, Strategy(tuple(schedule), give_up_after), SeriesConfig(limit),
        TimingModel(), rng, target="phonological", errors=errors, **kwargs,
    )


def check_accounting(trace: EpisodeTrace):
    failed = len(trace.of_type(EventType.ATTEMPT_FAILED))
    assert sum(trace.attempts_per_phase) == failed + int(trace.resolved)
    assert trace.total_time_ms == trace.expected_total_time()
    assert not (trace.resolved and trace.gave_up)
    assert trace.resolved or trace.gave_up
    if trace.of_type(EventType.THROW_UP_ARMS):
        assert trace.resolved
    times = [e.t_ms for e in trace.events]
    assert times == sorted(times)


def test_localize_without_errors(node, meta, rng):
    loc = localize(node, meta, LocalizationErrors(), rng, target="phonological")
    assert loc.mislocalized == frozenset()
    assert loc.fok
    assert loc.selected["phonological"] == node.parts["phonological"].matrix


def test_localize_binds_decoy(node, meta, decoy_errors, rng):
    loc = localize(node, meta, decoy_errors, rng, target="phonological")
    assert loc.mislocalized == {"phonological"}
    assert loc.selected["phonological"] == train_hebbian(DECOY)
    assert loc.selected["semantic"] == node.parts["semantic"].matrix


def test_localize_without_reference_has_no_fok(node, rng):
    loc = localize(node, MetaMemory({"semantic": SEMANTIC}), LocalizationErrors(), rng, target="phonological")
    assert not loc.fok


def test_localize_picks_one_of_several_decoys(node, meta, rng):
    decoys = (train_hebbian(DECOY), train_hebbian(SEMANTIC))
    errors = LocalizationErrors(frozenset({"phonological"}), {"phonological": decoys})
    chosen = {id(localize(node, meta, errors, rng).selected["phonological"]) for _ in range(40)}
    assert chosen == {id(d) for d in decoys}


def test_localize_rejects_unknown_parts(node, meta, rng):
    errors = LocalizationErrors(frozenset({"lexical"}), {"lexical": (train_hebbian(DECOY),)})
    with pytest.raises(ConfigurationError):
        localize(node, meta, errors, rng)
    with pytest.raises(ConfigurationError):
        LocalizationErrors(frozenset({"phonological"}))


def test_word_node_parts_share_size(x):
    with pytest.raises(ConfigurationError):
        WordNode("w", {"a": ComponentNet.trained(x), "b": ComponentNet.trained(BipolarVector((1, -1)))})
    with pytest.raises(ConfigurationError):
        WordNode("w", {})


def test_attempt_outcomes(default_net, x, rng):
    assert attempt(default_net, x, CueSpec(0), "retain_input", rng)
    assert all(attempt(default_net, x, CueSpec(1), "retain_input", rng) for _ in range(50))
    assert not attempt(train_hebbian(DECOY), x, CueSpec(0), "retain_input", rng)


def test_attempt_draws_the_same_amount_of_state(default_net, x):
    a, b = np.random.default_rng(5), np.random.default_rng(5)
    attempt(default_net, x, CueSpec(0), "retain_input", a)
    attempt(default_net, x, CueSpec(9), "retain_input", b)
    assert a.random() == b.random()


def test_series_success_and_exhaustion(node, meta, decoy_errors, x, rng):
    loc = localize(node, meta, LocalizationErrors(), rng)
    assert run_series(loc, "phonological", x, SeriesConfig(20, CueSpec(0)), rng) == (True, 1)

    blocked = localize(node, meta, decoy_errors, rng)
    assert run_series(blocked, "phonological", x, SeriesConfig(20, CueSpec(0)), rng) == (False, 20)


def test_series_is_reproducible(node, meta, x):
    def run(seed):
        rng = np.random.default_rng(seed)
        loc = localize(node, meta, LocalizationErrors(), rng)
        return run_series(loc, "phonological", x, SeriesConfig(20, CueSpec(8)), rng)

    assert run(9) == run(9)


def test_series_rejects_unlocalized_part(node, meta, x, rng):
    loc = localize(node, meta, LocalizationErrors(), rng)
    with pytest.raises(ConfigurationError):
        run_series(loc, "lexical", x, SeriesConfig(), rng)


def test_series_limit_must_be_positive():
    with pytest.raises(ConfigurationError):
        SeriesConfig(0)


def test_recognition_cue_resolves_immediately(node, meta, rng):
    trace = episode(node, meta, [Persist(CueSpec(0))], rng)
    resolved = trace.of_type(EventType.RESOLVED)
    assert [e.attempt_index for e in resolved] == [1]
    assert not trace.of_type(EventType.THROW_UP_ARMS)
    assert trace.events[0].type is EventType.LOCALIZED_STAGE
    assert trace.events[0].fok is True
    check_accounting(trace)


def test_context_parts_are_recalled_first(node, meta, rng):
    trace = episode(node, meta, [Persist(CueSpec(0))], rng)
    recalled = trace.of_type(EventType.PART_RECALLED)
    assert [e.part for e in recalled] == ["semantic"]
    assert trace.context_attempts == 1
    assert trace.events.index(recalled[0]) < trace.events.index(trace.of_type(EventType.RESOLVED)[0])


def test_mislocalized_part_is_never_recalled(node, meta, decoy_errors, rng):
    trace = episode(
        node, meta, [Persist(CueSpec(0)), FreeRecall()], rng, errors=decoy_errors
    )
    assert trace.gave_up
    assert not trace.resolved
    assert trace.attempts_per_phase == (60, 60)
    assert len(trace.of_type(EventType.SERIES_EXHAUSTED)) == 6
    check_accounting(trace)


def test_fok_follows_the_first_exhausted_series(node, meta, decoy_errors, rng):
    trace = episode(node, meta, [Persist(CueSpec(6)), FreeRecall(1)], rng, errors=decoy_errors)
    types = [e.type for e in trace.events]
    first = types.index(EventType.SERIES_EXHAUSTED)
    assert types[first + 1] is EventType.FOK_FELT
    assert types.count(EventType.FOK_FELT) == 1


def test_without_fok_persistence_stops_after_one_series(node, decoy_errors, rng):
    meta = MetaMemory({"semantic": SEMANTIC})
    trace = episode(node, meta, [Persist(CueSpec(0), 3)], rng, errors=decoy_errors)
    assert not trace.of_type(EventType.FOK_FELT)
    assert trace.attempts_per_phase == (20,)
    assert trace.gave_up
    check_accounting(trace)


def test_relocalization_after_long_struggle_throws_up_arms(node, meta, decoy_errors, rng):
    schedule = [Persist(CueSpec(6), 3), Relocalize(CueSpec(1))]
    trace = episode(node, meta, schedule, rng, errors=decoy_errors)
    types = [e.type for e in trace.events]
    reloc = types.index(EventType.RELOCALIZED)
    assert types[reloc + 1] is EventType.RESOLVED
    assert types[reloc + 2] is EventType.THROW_UP_ARMS
    assert trace.of_type(EventType.RESOLVED)[0].attempt_index == 61
    assert trace.localizations == 2
    check_accounting(trace)


def test_short_struggle_gives_no_throw_up_arms(node, meta, decoy_errors, rng):
    schedule = [Persist(CueSpec(6), 1), Relocalize(CueSpec(1))]
    trace = episode(node, meta, schedule, rng, errors=decoy_errors)
    assert trace.resolved
    assert not trace.of_type(EventType.THROW_UP_ARMS)
    trace = episode(node, meta, schedule, np.random.default_rng(1), errors=decoy_errors, arms_threshold=20)
    assert trace.of_type(EventType.THROW_UP_ARMS)


def test_budget_exhaustion_gives_up(node, meta, decoy_errors, rng):
    trace = episode(
        node, meta, [Persist(CueSpec(0), 3)], rng, errors=decoy_errors, give_up_after=25
    )
    assert trace.gave_up
    assert sum(trace.attempts_per_phase) == 25
    assert len(trace.of_type(EventType.SERIES_EXHAUSTED)) == 1
    assert trace.events[-1].type is EventType.GAVE_UP
    check_accounting(trace)


def test_phase_with_certain_cue_resolves_on_its_first_attempt(node, meta, decoy_errors, rng):
    schedule = [FreeRecall(1), Relocalize(CueSpec(4), 2)]
    trace = episode(node, meta, schedule, rng, errors=decoy_errors)
    assert trace.attempts_per_phase == (20, 1)


def test_timestamps_follow_the_timing_model(node, meta, rng):
    timing = TimingModel(t_localize=100, t_attempt=10, t_decision=5, t_pulse=1)
    trace = run_episode(
        node, meta, Strategy((Persist(CueSpec(0)),)), SeriesConfig(), timing, rng, target="phonological"
    )
    assert [e.t_ms for e in trace.events] == [100, 116, 132]
    assert trace.total_time_ms == 132


def test_events_reach_the_callback_in_order(node, meta, rng):
    seen = []
    trace = episode(node, meta, [Persist(CueSpec(0))], rng, on_event=seen.append)
    assert tuple(seen) == trace.events


def test_episodes_are_reproducible(node, meta, decoy_errors):
    schedule = [Persist(CueSpec(6)), FreeRecall(1), Relocalize(CueSpec(2))]
    first = episode(node, meta, schedule, np.random.default_rng(3), errors=decoy_errors)
    second = episode(node, meta, schedule, np.random.default_rng(3), errors=decoy_errors)
    assert first.to_json() == second.to_json()
    assert EpisodeTrace.from_json(first.to_json()) == first


def test_unknown_target_is_rejected(node, meta, rng):
    with pytest.raises(ConfigurationError):
        run_episode(node, meta, Strategy((FreeRecall(),)), SeriesConfig(), TimingModel(), rng, target="lexical")


@pytest.mark.parametrize(
    "build",
    [
        lambda: Strategy(()),
        lambda: Strategy((FreeRecall(),), give_up_after=0),
        lambda: Strategy((FreeRecall(0),)),
        lambda: TimingModel(t_pulse=-1),
    ],
)
def test_invalid_configuration_values(build):
    with pytest.raises(ConfigurationError):
        build()
