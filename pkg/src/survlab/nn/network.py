from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import asdict, dataclass, field
from typing import Any, Literal

import numpy as np

from ..errors import ConfigurationError, DataError
from . import autodiff
from .autodiff import Tape
from .inputs import CovariateBatch

logger = logging.getLogger(__name__)

Mode = Literal["train", "eval"]


@dataclass(frozen=True)
class NetworkSpec:
    """Shape of the covariate network psi(x; theta).

    Categorical inputs pass through an embedding of `embedding_width` sigmoid
    units with Gaussian dropout; the concatenated inputs feed the sigmoid
    hidden layers and a linear head of `output_count` units.
    """

    numeric_input_count: int = 0
    boolean_input_count: int = 0
    categorical_cardinalities: tuple[int, ...] = ()
    embedding_width: int = 10
    embedding_dropout: float = 0.7
    hidden_widths: tuple[int, ...] = (100, 100)
    hidden_dropout: float = 0.1
    output_count: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "categorical_cardinalities",
            tuple(int(c) for c in self.categorical_cardinalities),
        )
        object.__setattr__(
            self, "hidden_widths", tuple(int(w) for w in self.hidden_widths)
        )

    @property
    def input_width(self) -> int:
        return (
            self.numeric_input_count
            + self.boolean_input_count
            + len(self.categorical_cardinalities) * self.embedding_width
        )

    @property
    def layer_widths(self) -> list[int]:
        """Fan sizes from the concatenated input through the head."""
        return [self.input_width, *self.hidden_widths, self.output_count]

    def validate(self) -> None:
        if self.numeric_input_count < 0 or self.boolean_input_count < 0:
            raise ConfigurationError("Input counts must be >= 0")
        if any(c < 1 for c in self.categorical_cardinalities):
            raise ConfigurationError(
                f"Categorical cardinalities must be >= 1: {self.categorical_cardinalities}"
            )
        if self.categorical_cardinalities and self.embedding_width < 1:
            raise ConfigurationError("embedding_width must be >= 1")
        if self.input_width < 1:
            raise ConfigurationError("Network has no inputs")
        if any(w < 1 for w in self.hidden_widths):
            raise ConfigurationError(f"Hidden widths must be >= 1: {self.hidden_widths}")
        if self.output_count < 1:
            raise ConfigurationError("output_count must be >= 1")
        for name in ("embedding_dropout", "hidden_dropout"):
            rate = getattr(self, name)
            if not 0.0 <= rate < 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1), got {rate}")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["categorical_cardinalities"] = list(self.categorical_cardinalities)
        d["hidden_widths"] = list(self.hidden_widths)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> NetworkSpec:
        return cls(
            numeric_input_count=int(d.get("numeric_input_count", 0)),
            boolean_input_count=int(d.get("boolean_input_count", 0)),
            categorical_cardinalities=tuple(d.get("categorical_cardinalities", ())),
            embedding_width=int(d.get("embedding_width", 10)),
            embedding_dropout=float(d.get("embedding_dropout", 0.7)),
            hidden_widths=tuple(d.get("hidden_widths", (100, 100))),
            hidden_dropout=float(d.get("hidden_dropout", 0.1)),
            output_count=int(d.get("output_count", 1)),
        )


@dataclass(frozen=True)
class NetworkParams:
    """theta: embedding tables, then (fan_in, fan_out) weights and biases per layer.

    The last weight/bias pair is the linear head.
    """

    spec: NetworkSpec
    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)
    embeddings: list[np.ndarray] = field(default_factory=list)

    def arrays(self) -> list[np.ndarray]:
        """Layer-ordered flat view used by optimizers and serialization."""
        out = list(self.embeddings)
        for W, b in zip(self.weights, self.biases, strict=True):
            out.extend([W, b])
        return out

    def with_arrays(self, arrays: list[np.ndarray]) -> NetworkParams:
        n_emb = len(self.embeddings)
        rest = arrays[n_emb:]
        return type(self)(
            spec=self.spec,
            embeddings=[np.array(a, dtype=np.float64) for a in arrays[:n_emb]],
            weights=[np.array(a, dtype=np.float64) for a in rest[0::2]],
            biases=[np.array(a, dtype=np.float64) for a in rest[1::2]],
        )

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> NetworkParams:
        return self.with_arrays([fn(a) for a in self.arrays()])

    def equals(self, other: NetworkParams) -> bool:
        mine, theirs = self.arrays(), other.arrays()
        return len(mine) == len(theirs) and all(
            np.array_equal(a, b) for a, b in zip(mine, theirs, strict=True)
        )

    def is_finite(self) -> bool:
        return all(np.isfinite(a).all() for a in self.arrays())

    @classmethod
    def zeros(cls, spec: NetworkSpec) -> NetworkParams:
        spec.validate()
        widths = spec.layer_widths
        return cls(
            spec=spec,
            embeddings=[
                np.zeros((card, spec.embedding_width))
                for card in spec.categorical_cardinalities
            ],
            weights=[np.zeros((a, b)) for a, b in zip(widths[:-1], widths[1:])],
            biases=[np.zeros(b) for b in widths[1:]],
        )


@dataclass(frozen=True)
class GradientBuffer(NetworkParams):
    """dL/dtheta, shape-identical to the parameters it was taken against."""

    @classmethod
    def zeros_like(cls, params: NetworkParams) -> GradientBuffer:
        return cls(
            spec=params.spec,
            embeddings=[np.zeros_like(a) for a in params.embeddings],
            weights=[np.zeros_like(a) for a in params.weights],
            biases=[np.zeros_like(a) for a in params.biases],
        )

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(a * a)) for a in self.arrays())))


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_params(spec: NetworkSpec, seed: int) -> NetworkParams:
    """Glorot-uniform weights and embeddings, zero biases."""
    spec.validate()
    rng = np.random.default_rng(seed)
    embeddings = [
        _glorot(rng, card, spec.embedding_width)
        for card in spec.categorical_cardinalities
    ]
    widths = spec.layer_widths
    weights = [_glorot(rng, a, b) for a, b in zip(widths[:-1], widths[1:])]
    biases = [np.zeros(b) for b in widths[1:]]
    return NetworkParams(spec=spec, weights=weights, biases=biases, embeddings=embeddings)


def check_inputs(spec: NetworkSpec, x: CovariateBatch) -> None:
    if x.numeric.shape[1] != spec.numeric_input_count:
        raise DataError(
            f"Expected {spec.numeric_input_count} numeric inputs, got {x.numeric.shape[1]}"
        )
    if x.boolean.shape[1] != spec.boolean_input_count:
        raise DataError(
            f"Expected {spec.boolean_input_count} boolean inputs, got {x.boolean.shape[1]}"
        )
    if x.categorical.shape[1] != len(spec.categorical_cardinalities):
        raise DataError(
            f"Expected {len(spec.categorical_cardinalities)} categorical inputs, "
            f"got {x.categorical.shape[1]}"
        )
    if not (np.isfinite(x.numeric).all() and np.isfinite(x.boolean).all()):
        bad = np.flatnonzero(
            ~(np.isfinite(x.numeric).all(axis=1) & np.isfinite(x.boolean).all(axis=1))
        )
        raise DataError(f"Non-finite covariates in rows {bad[:5].tolist()}")
    for i, card in enumerate(spec.categorical_cardinalities):
        col = x.categorical[:, i]
        if col.size and (col.min() < 0 or col.max() >= card):
            raise DataError(
                f"Categorical input {i} has levels outside [0, {card}): "
                f"min={col.min()}, max={col.max()}"
            )


def forward(
    params: NetworkParams,
    x: CovariateBatch,
    mode: Mode = "eval",
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, Tape]:
    """psi(x) for every row, shape (n, output_count), plus the tape for backward."""
    spec = params.spec
    check_inputs(spec, x)
    train = mode == "train"
    tape = Tape(params, batch_size=len(x))

    a = autodiff.input_block(tape, x.numeric, x.boolean, x.categorical, train, rng)
    n_hidden = len(spec.hidden_widths)
    for layer in range(n_hidden):
        z = autodiff.dense(tape, a, layer)
        a = autodiff.sigmoid(tape, z)
        a = autodiff.gaussian_dropout(tape, a, spec.hidden_dropout, train, rng)
    out = autodiff.dense(tape, a, n_hidden)
    return out, tape
