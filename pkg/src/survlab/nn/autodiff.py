"""Tape-based reverse mode for the covariate network.

Each primitive computes its forward value on a batch and pushes one closure
onto the tape. A closure receives the cotangent of its output plus the
gradient buffer, accumulates parameter gradients, and returns the cotangent
of its input. The tape is rebuilt on every forward call.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import expit

from ..errors import UsageError

if TYPE_CHECKING:
    from .network import GradientBuffer, NetworkParams

Step = Callable[[np.ndarray, "GradientBuffer"], np.ndarray | None]


class Tape:
    """Ordered record of one forward pass."""

    def __init__(self, params: NetworkParams, batch_size: int):
        self.params = params
        self.batch_size = batch_size
        self.output_count = params.spec.output_count
        self._steps: list[Step] = []

    def push(self, step: Step) -> None:
        self._steps.append(step)

    def __len__(self) -> int:
        return len(self._steps)


def backward(tape: Tape, output_cotangent: np.ndarray) -> GradientBuffer:
    """Gradient of <outputs, cotangent> with respect to every parameter."""
    from .network import GradientBuffer

    g = np.asarray(output_cotangent, dtype=np.float64)
    if g.ndim == 1:
        g = g[None, :]
    if g.shape != (tape.batch_size, tape.output_count):
        raise UsageError(
            f"Cotangent shape {g.shape} does not match outputs "
            f"({tape.batch_size}, {tape.output_count})"
        )
    grads = GradientBuffer.zeros_like(tape.params)
    upstream: np.ndarray | None = g
    for step in reversed(tape._steps):
        if upstream is None:
            break
        upstream = step(upstream, grads)
    return grads


# --- primitives -------------------------------------------------------------


def dense(tape: Tape, a: np.ndarray, layer: int) -> np.ndarray:
    W = tape.params.weights[layer]
    b = tape.params.biases[layer]
    z = a @ W + b

    def step(g: np.ndarray, grads: GradientBuffer) -> np.ndarray:
        grads.weights[layer] += a.T @ g
        grads.biases[layer] += g.sum(axis=0)
        return g @ W.T

    tape.push(step)
    return z


def sigmoid(tape: Tape, z: np.ndarray) -> np.ndarray:
    s = expit(z)

    def step(g: np.ndarray, _grads: GradientBuffer) -> np.ndarray:
        return g * s * (1.0 - s)

    tape.push(step)
    return s


def _dropout_noise(
    shape: tuple[int, ...], rate: float, rng: np.random.Generator
) -> np.ndarray:
    # multiplicative N(1, p / (1 - p))
    return rng.normal(1.0, np.sqrt(rate / (1.0 - rate)), size=shape)


def gaussian_dropout(
    tape: Tape,
    a: np.ndarray,
    rate: float,
    train: bool,
    rng: np.random.Generator | None,
) -> np.ndarray:
    if not train or rate == 0.0:
        return a
    if rng is None:
        raise UsageError("Train-mode forward requires a random stream")
    noise = _dropout_noise(a.shape, rate, rng)

    def step(g: np.ndarray, _grads: GradientBuffer) -> np.ndarray:
        return g * noise

    tape.push(step)
    return a * noise


def input_block(
    tape: Tape,
    numeric: np.ndarray,
    boolean: np.ndarray,
    categorical: np.ndarray,
    train: bool,
    rng: np.random.Generator | None,
) -> np.ndarray:
    """Concatenate [numeric, boolean, sigmoid(embedding) with dropout] per row.

    Recorded as a single step because the embedding branches end at the
    concatenation: only their slice of the cotangent flows back, into the
    embedding rows that were looked up.
    """
    spec = tape.params.spec
    parts = [numeric, boolean]
    cached: list[tuple[np.ndarray, np.ndarray, np.ndarray | None]] = []
    for i, table in enumerate(tape.params.embeddings):
        levels = categorical[:, i]
        s = expit(table[levels])
        noise = None
        if train and spec.embedding_dropout > 0.0:
            if rng is None:
                raise UsageError("Train-mode forward requires a random stream")
            noise = _dropout_noise(s.shape, spec.embedding_dropout, rng)
            parts.append(s * noise)
        else:
            parts.append(s)
        cached.append((levels, s, noise))
    a = np.concatenate(parts, axis=1)
    offset = numeric.shape[1] + boolean.shape[1]
    width = spec.embedding_width

    def step(g: np.ndarray, grads: GradientBuffer) -> None:
        for i, (levels, s, noise) in enumerate(cached):
            gi = g[:, offset + i * width : offset + (i + 1) * width]
            if noise is not None:
                gi = gi * noise
            np.add.at(grads.embeddings[i], levels, gi * s * (1.0 - s))
        return None

    tape.push(step)
    return a
