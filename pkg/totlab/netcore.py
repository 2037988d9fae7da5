"""Bipolar patterns, Hebbian synaptic matrices, damage and one-shot decoding.

A network of size N stores patterns of +1/-1 units in an N x N integer
weight grid (row = output neuron, column = input neuron). Damage never
touches the stored weights: severed links and dead input neurons are kept
as masks and folded in by :attr:`SynapticMatrix.effective_weights`.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError


logger = logging.getLogger(__name__)


class TieRule(enum.Enum):
    """What a neuron outputs when its net input is exactly zero."""

    RETAIN_INPUT = "retain_input"
    FORCE_POSITIVE = "force_positive"
    FORCE_NEGATIVE = "force_negative"

    @classmethod
    def parse(cls, value: "str | TieRule") -> "TieRule":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        try:
            return TIE_RULES[key]
        except KeyError:
            raise ConfigurationError(
                f"unknown tie rule {value!r}; expected one of {sorted(TIE_RULES)}"
            ) from None


TIE_RULES = {rule.value: rule for rule in TieRule}


@dataclass(frozen=True)
class BipolarVector:
    components: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(c) for c in self.components)
        if not values:
            raise ConfigurationError("a bipolar vector needs at least one component")
        bad = [c for c in values if c not in (1, -1)]
        if bad:
            raise ConfigurationError(
                f"bipolar components must be +1 or -1, got {bad[0]!r}"
            )
        object.__setattr__(self, "components", values)

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.components, dtype=np.int64)

    def __neg__(self) -> "BipolarVector":
        return BipolarVector(tuple(-c for c in self.components))

    def __len__(self) -> int:
        return len(self.components)

    @classmethod
    def from_array(cls, values: Iterable[int]) -> "BipolarVector":
        return cls(tuple(int(v) for v in values))

    def to_json(self) -> dict:
        return {"components": list(self.components)}

    @classmethod
    def from_json(cls, data: dict) -> "BipolarVector":
        if not isinstance(data, dict) or "components" not in data:
            raise ConfigurationError("vector JSON must be an object with 'components'")
        components = data["components"]
        if not isinstance(components, list) or any(
            isinstance(c, bool) or not isinstance(c, int) for c in components
        ):
            raise ConfigurationError("'components' must be a list of integers 1 and -1")
        return cls(tuple(components))


def _index(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigurationError(f"{what} must be an integer index, got {value!r}")
    return int(value)


def _index_list(values, what: str) -> list:
    if isinstance(values, (str, bytes, dict)) or not isinstance(values, Iterable):
        raise ConfigurationError(f"{what} must be a list of indices, got {values!r}")
    return list(values)


def _link_set(links: Iterable[Sequence[int]]) -> frozenset[tuple[int, int]]:
    pairs = []
    for link in _index_list(links, "severed links"):
        if not isinstance(link, (list, tuple)) or len(link) != 2:
            raise ConfigurationError(f"a link needs two indices, got {link!r}")
        pairs.append((_index(link[0], "a link end"), _index(link[1], "a link end")))
    return frozenset(pairs)


def _dead_set(dead: Iterable[int]) -> frozenset[int]:
    return frozenset(_index(j, "a dead input") for j in _index_list(dead, "dead inputs"))


@dataclass(frozen=True)
class DamageSpec:
    severed_links: frozenset[tuple[int, int]] = frozenset()
    dead_inputs: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "severed_links", _link_set(self.severed_links))
        object.__setattr__(self, "dead_inputs", _dead_set(self.dead_inputs))

    def validate(self, n: int) -> None:
        for i, j in self.severed_links:
            if not (0 <= i < n and 0 <= j < n):
                raise ConfigurationError(f"link ({i}, {j}) out of range for N={n}")
        for j in self.dead_inputs:
            if not 0 <= j < n:
                raise ConfigurationError(f"dead input {j} out of range for N={n}")
        if len(self.dead_inputs) >= n:
            raise ConfigurationError(
                f"{len(self.dead_inputs)} dead inputs leave no surviving input for N={n}"
            )

    @property
    def is_empty(self) -> bool:
        return not self.severed_links and not self.dead_inputs

    def to_json(self) -> dict:
        return {
            "severed_links": [list(link) for link in sorted(self.severed_links)],
            "dead_inputs": sorted(self.dead_inputs),
        }

    @classmethod
    def from_json(cls, data: dict) -> "DamageSpec":
        if not isinstance(data, dict):
            raise ConfigurationError("damage JSON must be an object")
        links = _index_list(data.get("severed_links", data.get("severed", [])), "severed links")
        dead = _index_list(data.get("dead_inputs", []), "dead inputs")
        spec = cls(_link_set(links), _dead_set(dead))
        if len(spec.severed_links) != len(links):
            raise ConfigurationError("severed links must be distinct")
        if len(spec.dead_inputs) != len(dead):
            raise ConfigurationError("dead inputs must be distinct")
        return spec


@dataclass(frozen=True, eq=False)
class SynapticMatrix:
    n: int
    weights: np.ndarray
    severed: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    dead_inputs: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        raw = np.asarray(self.weights)
        if raw.shape != (self.n, self.n):
            raise ConfigurationError(
                f"weights must be {self.n}x{self.n}, got shape {raw.shape}"
            )
        if raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or not np.all(raw == np.round(raw)):
                raise ConfigurationError("weights must be integers")
        elif raw.dtype.kind not in "iub":
            raise ConfigurationError(f"weights must be integers, got dtype {raw.dtype}")
        weights = raw.astype(np.int64, copy=True)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "severed", _link_set(self.severed))
        object.__setattr__(self, "dead_inputs", _dead_set(self.dead_inputs))
        DamageSpec(self.severed, self.dead_inputs).validate(self.n)

    @cached_property
    def effective_weights(self) -> np.ndarray:
        effective = self.weights.copy()
        for i, j in self.severed:
            effective[i, j] = 0
        if self.dead_inputs:
            effective[:, sorted(self.dead_inputs)] = 0
        effective.setflags(write=False)
        return effective

    def present_links(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(self.n)
            if (i, j) not in self.severed
        ]

    def __eq__(self, other):
        if not isinstance(other, SynapticMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.weights, other.weights)
            and self.severed == other.severed
            and self.dead_inputs == other.dead_inputs
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "weights": self.weights.tolist(),
            "severed": [list(link) for link in sorted(self.severed)],
            "dead_inputs": sorted(self.dead_inputs),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SynapticMatrix":
        if not isinstance(data, dict) or "n" not in data or "weights" not in data:
            raise ConfigurationError("matrix JSON must be an object with 'n' and 'weights'")
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ConfigurationError(f"'n' must be a positive integer, got {n!r}")
        rows = data["weights"]
        if not isinstance(rows, list) or any(
            not isinstance(row, list)
            or any(isinstance(w, bool) or not isinstance(w, int) for w in row)
            for row in rows
        ):
            raise ConfigurationError("'weights' must be a list of integer rows")
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ConfigurationError(f"'weights' must be {n} rows of {n} integers")
        return cls(
            n=n,
            weights=np.array(rows, dtype=np.int64),
            severed=_link_set(data.get("severed", [])),
            dead_inputs=_dead_set(data.get("dead_inputs", [])),
        )


def train_hebbian(x: BipolarVector, zero_diagonal: bool = False) -> SynapticMatrix:
    """Outer-product storage of a single pattern: w[i][j] = x_i * x_j."""
    a = x.array
    weights = np.outer(a, a)
    if zero_diagonal:
        np.fill_diagonal(weights, 0)
    return SynapticMatrix(x.n, weights)


def train_multi(
    patterns: Sequence[BipolarVector], zero_diagonal: bool = False
) -> SynapticMatrix:
    """Sum of outer products over all patterns (repeats count twice)."""
    if not patterns:
        raise ConfigurationError("train_multi needs at least one pattern")
    n = patterns[0].n
    for index, p in enumerate(patterns):
        if p.n != n:
            raise ConfigurationError(
                f"pattern {index} has length {p.n}, expected {n}"
            )
    weights = np.zeros((n, n), dtype=np.int64)
    for p in patterns:
        a = p.array
        weights += np.outer(a, a)
    if zero_diagonal:
        np.fill_diagonal(weights, 0)
    return SynapticMatrix(n, weights)


def apply_damage(W: SynapticMatrix, spec: DamageSpec) -> SynapticMatrix:
    spec.validate(W.n)
    return SynapticMatrix(
        n=W.n,
        weights=W.weights,
        severed=W.severed | spec.severed_links,
        dead_inputs=W.dead_inputs | spec.dead_inputs,
    )


def decode_batch(W: SynapticMatrix, inputs: np.ndarray, tie: TieRule) -> np.ndarray:
    """Decode every row of ``inputs`` in one pass.

    Row r of the result is the thresholded field h = W_eff @ inputs[r];
    zero fields are resolved by ``tie``.
    """
    tie = TieRule.parse(tie)
    inputs = np.asarray(inputs, dtype=np.int64)
    if inputs.ndim != 2 or inputs.shape[1] != W.n:
        raise ConfigurationError(
            f"inputs must have {W.n} columns, got shape {inputs.shape}"
        )
    fields = inputs @ W.effective_weights.T
    outputs = np.sign(fields)
    ties = fields == 0
    if tie is TieRule.RETAIN_INPUT:
        outputs = np.where(ties, inputs, outputs)
    elif tie is TieRule.FORCE_POSITIVE:
        outputs[ties] = 1
    else:
        outputs[ties] = -1
    return outputs


def decode(W: SynapticMatrix, v: BipolarVector, tie: TieRule = TieRule.RETAIN_INPUT) -> BipolarVector:
    if v.n != W.n:
        raise ConfigurationError(f"input length {v.n} does not match network size {W.n}")
    return BipolarVector.from_array(decode_batch(W, v.array[None, :], tie)[0])


def matches_reference(y: BipolarVector, x: BipolarVector) -> bool:
    if y.n != x.n:
        raise ConfigurationError(f"cannot compare vectors of lengths {y.n} and {x.n}")
    return y.components == x.components
