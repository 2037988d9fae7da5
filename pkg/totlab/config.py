"""Configuration files: JSON loading, episode configurations and CLI run options."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .curvelab import CueSpec, NoiseModel, Thresholds
from .errors import ConfigurationError
from .netcore import BipolarVector, DamageSpec, SynapticMatrix, TieRule, train_hebbian
from .retrieval import (
    DEFAULT_ARMS_THRESHOLD,
    ComponentNet,
    EpisodeTrace,
    LocalizationErrors,
    MetaMemory,
    SeriesConfig,
    Strategy,
    TimingModel,
    TraceEvent,
    WordNode,
    run_episode,
)


logger = logging.getLogger(__name__)

COMMANDS = ("curve", "ensemble", "simulate", "scenario")
MAX_SEED = 2**64 - 1


def load_json(path):
    """Read a UTF-8 JSON file, naming the path and position on failure."""
    if not os.path.exists(path):
        raise ConfigurationError(f"{path}: file not found")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(
            f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"{path}: cannot read file: {e}") from e


def dump_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def load_matrix(path) -> SynapticMatrix:
    return SynapticMatrix.from_json(load_json(path))


def load_vector(path) -> BipolarVector:
    return BipolarVector.from_json(load_json(path))


def load_damage(path) -> DamageSpec:
    return DamageSpec.from_json(load_json(path))


def _decoy_from_json(data) -> SynapticMatrix:
    if isinstance(data, dict) and "weights" in data:
        return SynapticMatrix.from_json(data)
    if isinstance(data, dict) and "pattern" in data:
        return train_hebbian(BipolarVector.from_json(data["pattern"]))
    raise ConfigurationError("a decoy must be a matrix object or an object with 'pattern'")


def _require(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise ConfigurationError(f"{where}: missing '{key}'")
    return data[key]


@dataclass(frozen=True)
class EpisodeConfig:
    node: WordNode
    meta: MetaMemory
    strategy: Strategy
    series: SeriesConfig = SeriesConfig()
    timing: TimingModel = TimingModel()
    target: str = "phonological"
    errors: LocalizationErrors = LocalizationErrors()
    context_cue: CueSpec = CueSpec(0)
    arms_threshold: int = DEFAULT_ARMS_THRESHOLD

    def __post_init__(self):
        if self.target not in self.node.parts:
            raise ConfigurationError(f"target part {self.target!r} is not a part of {self.node.id!r}")
        if self.arms_threshold < 0:
            raise ConfigurationError(f"arms_threshold must be non-negative, got {self.arms_threshold}")
        self.meta.check(self.node.n)

    def run(
        self,
        rng: np.random.Generator,
        on_event: Callable[[TraceEvent], None] | None = None,
    ) -> EpisodeTrace:
        return run_episode(
            self.node,
            self.meta,
            self.strategy,
            self.series,
            self.timing,
            rng,
            target=self.target,
            errors=self.errors,
            context_cue=self.context_cue,
            arms_threshold=self.arms_threshold,
            on_event=on_event,
        )

    def to_json(self) -> dict:
        return {
            "node": {
                "id": self.node.id,
                "parts": {name: part.to_json() for name, part in self.node.parts.items()},
            },
            "meta": {
                "references": {name: ref.to_json() for name, ref in self.meta.references.items()}
            },
            "errors": {
                "mislocalize": sorted(self.errors.mislocalize),
                "decoys": {
                    name: [decoy.to_json() for decoy in decoys]
                    for name, decoys in self.errors.decoys.items()
                },
            },
            "strategy": self.strategy.to_json(),
            "series": {
                "limit": self.series.limit,
                "cue": self.series.cue.to_json(),
                "tie": self.series.tie.value,
            },
            "timing": self.timing.to_json(),
            "target": self.target,
            "context_cue": self.context_cue.to_json(),
            "arms_threshold": self.arms_threshold,
        }

    @classmethod
    def from_json(cls, data: dict) -> "EpisodeConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("episode configuration must be a JSON object")
        node_data = _require(data, "node", "episode")
        parts = _require(node_data, "parts", "node")
        if not isinstance(parts, dict):
            raise ConfigurationError("node: 'parts' must be an object")
        node = WordNode(
            node_data.get("id", "word"),
            {name: ComponentNet.from_json(part) for name, part in parts.items()},
        )

        references = data.get("meta", {}).get("references", {})
        meta = MetaMemory({name: BipolarVector.from_json(r) for name, r in references.items()})

        errors_data = data.get("errors", {})
        errors = LocalizationErrors(
            frozenset(errors_data.get("mislocalize", [])),
            {
                name: tuple(_decoy_from_json(d) for d in decoys)
                for name, decoys in errors_data.get("decoys", {}).items()
            },
        )

        series_data = data.get("series", {})
        series = SeriesConfig(
            series_data.get("limit", SeriesConfig.limit),
            CueSpec.from_json(series_data["cue"]) if "cue" in series_data else CueSpec(0),
            series_data.get("tie", TieRule.RETAIN_INPUT.value),
        )

        return cls(
            node=node,
            meta=meta,
            strategy=Strategy.from_json(_require(data, "strategy", "episode")),
            series=series,
            timing=TimingModel.from_json(data.get("timing", {})),
            target=data.get("target", "phonological"),
            errors=errors,
            context_cue=CueSpec.from_json(data["context_cue"]) if "context_cue" in data else CueSpec(0),
            arms_threshold=data.get("arms_threshold", DEFAULT_ARMS_THRESHOLD),
        )


def load_episode(path) -> EpisodeConfig:
    data = load_json(path)
    try:
        return EpisodeConfig.from_json(data)
    except ConfigurationError as e:
        raise ConfigurationError(f"{path}: {e}") from e
    except (KeyError, TypeError, AttributeError) as e:
        raise ConfigurationError(f"{path}: malformed episode configuration ({e!r})") from e


@dataclass(frozen=True)
class RunConfig:
    """Options of one CLI invocation after parsing and validation."""

    command: str
    matrix: str | None = None
    reference: str | None = None
    damage: str | None = None
    config: str | None = None
    out: str | None = None
    demo: str = "default"
    mode: str = "dead-neurons"
    k: int = 4
    count: int = 10
    samples: int = 1000
    seed: int = 0
    noise_model: NoiseModel = NoiseModel.REPLACEMENT
    tie: TieRule = TieRule.RETAIN_INPUT
    thresholds: Thresholds = field(default_factory=Thresholds)
    limit: int | None = None
    arms_threshold: int | None = None
    workers: int = 1
    mc_samples: int | None = None
    scenario: str = "chekhov"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        if isinstance(self.seed, bool) or not 0 <= self.seed <= MAX_SEED:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        if self.samples < 1:
            raise ConfigurationError(f"samples must be at least 1, got {self.samples}")
        if self.limit is not None and self.limit < 1:
            raise ConfigurationError(f"limit must be at least 1, got {self.limit}")
        if self.arms_threshold is not None and self.arms_threshold < 0:
            raise ConfigurationError(f"arms threshold must be non-negative, got {self.arms_threshold}")
        if self.mc_samples is not None and self.mc_samples < 1:
            raise ConfigurationError(f"--mc needs at least 1 sample, got {self.mc_samples}")
        object.__setattr__(self, "noise_model", NoiseModel.parse(self.noise_model))
        object.__setattr__(self, "tie", TieRule.parse(self.tie))
        for name in ("matrix", "reference", "damage", "config"):
            path = getattr(self, name)
            if path is not None and not os.path.exists(path):
                raise ConfigurationError(f"{path}: file not found")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        delta = getattr(args, "delta_steep", None)
        return cls(
            command=args.command,
            matrix=getattr(args, "matrix", None),
            reference=getattr(args, "reference", None),
            damage=getattr(args, "damage", None),
            config=getattr(args, "config", None),
            out=getattr(args, "out", None),
            demo=getattr(args, "demo", "default"),
            mode=getattr(args, "mode", "dead-neurons"),
            k=getattr(args, "k", 4),
            count=getattr(args, "count", 10),
            samples=getattr(args, "samples", 1000),
            seed=getattr(args, "seed", 0),
            noise_model=getattr(args, "noise", "replacement"),
            tie=getattr(args, "tie", "retain_input"),
            thresholds=Thresholds() if delta is None else Thresholds(delta),
            limit=getattr(args, "limit", None),
            arms_threshold=getattr(args, "arms_threshold", None),
            workers=getattr(args, "workers", 1),
            mc_samples=getattr(args, "mc", None),
            scenario=getattr(args, "scenario", "chekhov"),
        )
