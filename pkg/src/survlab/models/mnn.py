"""Metaparametric network models.

A network psi(x) emits one output per basis function per event type. Each
output passes through the positivity map h and weights a localized time
basis, so every family reads its hazard-like quantity as a nonnegative
combination of basis functions:

- PH: hazard ratio omega_j(t, x) = sum_k h(psi_kj) nu_k(t) against a step baseline
- QR: quantile Q_j(u, x) = sum_k h(psi_kj) int_0^u nu_k on the u = -log(tau) axis
- DH: hazard lambda_j(t, x) = sum_k h(psi_kj) nu_k(t)

Event types are columns 0..J-1 here; records carry them as 1..J.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import ClassVar, Literal

import numpy as np

from ..basis import BasisSet
from ..errors import ConfigurationError, StateError, UsageError
from ..nn import CovariateBatch, NetworkParams, NetworkSpec, Tape, forward
from ..nn.network import Mode
from .positivity import PositivityMap
from .step import StepFunction

logger = logging.getLogger(__name__)

ModelKind = Literal["ph", "qr", "dh"]
MODEL_KINDS: tuple[str, ...] = ("ph", "qr", "dh")


def row_times(t, n: int) -> np.ndarray:
    """One time per row: a scalar broadcasts, a length-n vector passes through."""
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.shape != (n,):
        raise UsageError(f"Expected a scalar or {n} times, got shape {arr.shape}")
    if np.isnan(arr).any() or (arr < 0).any():
        raise UsageError("Times must be >= 0")
    return arr


@dataclass(eq=False)
class MnnModel:
    params: NetworkParams
    bases: list[BasisSet]
    positivity: PositivityMap = field(default_factory=PositivityMap)

    kind: ClassVar[str] = ""

    def __post_init__(self) -> None:
        if not self.bases:
            raise ConfigurationError("A model needs at least one event type")
        expected = sum(b.size for b in self.bases)
        if self.spec.output_count != expected:
            raise ConfigurationError(
                f"Network output_count {self.spec.output_count} does not match "
                f"the {expected} basis functions across {len(self.bases)} event types"
            )

    @property
    def spec(self) -> NetworkSpec:
        return self.params.spec

    @property
    def event_count(self) -> int:
        return len(self.bases)

    @cached_property
    def output_slices(self) -> list[slice]:
        out, start = [], 0
        for b in self.bases:
            out.append(slice(start, start + b.size))
            start += b.size
        return out

    def with_params(self, params: NetworkParams):
        return replace(self, params=params)

    # --- network composition ----------------------------------------------

    def network_outputs(
        self,
        x: CovariateBatch,
        mode: Mode = "eval",
        rng: np.random.Generator | None = None,
    ) -> tuple[np.ndarray, Tape]:
        return forward(self.params, x, mode=mode, rng=rng)

    def split_coefficients(self, psi: np.ndarray) -> list[np.ndarray]:
        """h(psi) split per event type: list of (n, K_j)."""
        return [self.positivity(psi[:, sl]) for sl in self.output_slices]

    def output_cotangent(self, coef_grads: list[np.ndarray], psi: np.ndarray) -> np.ndarray:
        """Chain dL/dc_j through h'(psi) into one (n, output_count) cotangent."""
        parts = [
            g * self.positivity.derivative(psi[:, sl])
            for g, sl in zip(coef_grads, self.output_slices, strict=True)
        ]
        return np.concatenate(parts, axis=1)

    def coefficients(
        self,
        x: CovariateBatch,
        mode: Mode = "eval",
        rng: np.random.Generator | None = None,
    ) -> list[np.ndarray]:
        psi, _ = self.network_outputs(x, mode=mode, rng=rng)
        return self.split_coefficients(psi)

    # --- survival quantities ----------------------------------------------

    def _cumulative(self, coefs: list[np.ndarray], t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def cumulative_hazard(self, x: CovariateBatch, t) -> np.ndarray:
        """Lambda_j(t, x) per row and event type, shape (n, J)."""
        coefs = self.coefficients(x)
        return self._cumulative(coefs, row_times(t, len(x)))

    def survival(self, x: CovariateBatch, t) -> np.ndarray:
        """S(t, x) = exp(-sum_j Lambda_j(t, x)), shape (n,)."""
        return np.exp(-self.cumulative_hazard(x, t).sum(axis=1))

    def cumulative_hazard_curves(self, x: CovariateBatch, times) -> np.ndarray:
        """Lambda_j on a shared time grid from one forward pass, shape (n, G, J)."""
        grid = np.atleast_1d(np.asarray(times, dtype=np.float64))
        coefs = self.coefficients(x)
        n = len(x)
        out = np.empty((n, grid.size, self.event_count))
        for g, t in enumerate(grid):
            out[:, g, :] = self._cumulative(coefs, row_times(t, n))
        return out

    def survival_curves(self, x: CovariateBatch, times) -> np.ndarray:
        """S(t, x) on a shared time grid, shape (n, G)."""
        return np.exp(-self.cumulative_hazard_curves(x, times).sum(axis=2))


def _stieltjes(coefs: np.ndarray, folded: np.ndarray) -> np.ndarray:
    """Row-wise sum_k c_k G_k where G may hold +inf (absorbing baseline jump)."""
    infinite = np.isinf(folded)
    finite = np.where(infinite, 0.0, folded)
    out = np.einsum("nk,nk->n", coefs, finite)
    hit = (infinite & (coefs > 0)).any(axis=1)
    out[hit] = np.inf
    return out


@dataclass(eq=False)
class PhMnnModel(MnnModel):
    """Proportional hazards with a time-localized hazard ratio.

    `baselines` holds one cumulative baseline step function per event type
    and is filled by baseline estimation after training.
    """

    baselines: list[StepFunction] | None = None

    kind: ClassVar[str] = "ph"

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.baselines is not None and len(self.baselines) != self.event_count:
            raise ConfigurationError(
                f"Expected {self.event_count} baselines, got {len(self.baselines)}"
            )

    def with_baselines(self, baselines: list[StepFunction] | None) -> PhMnnModel:
        return replace(self, baselines=baselines)

    def hazard_ratio(
        self,
        x: CovariateBatch,
        t,
        mode: Mode = "eval",
        rng: np.random.Generator | None = None,
    ) -> np.ndarray:
        """omega_j(t, x), shape (n, J)."""
        coefs = self.coefficients(x, mode=mode, rng=rng)
        tt = row_times(t, len(x))
        return np.column_stack(
            [
                np.einsum("nk,nk->n", c, b.evaluate(tt))
                for c, b in zip(coefs, self.bases, strict=True)
            ]
        )

    @cached_property
    def folded_baselines(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per event: jump times and G_k(s) = sum_{s' <= s} dLambda0(s') nu_k(s')."""
        if self.baselines is None:
            raise StateError("PH model has no baseline; estimate it before predicting")
        out = []
        for step, basis in zip(self.baselines, self.bases, strict=True):
            if len(step) == 0:
                out.append((step.times, np.zeros((0, basis.size))))
                continue
            nu = basis.evaluate(step.times)
            # an infinite jump only counts where the basis is active
            contrib = np.where(nu > 0, step.jumps[:, None] * nu, 0.0)
            out.append((step.times, np.cumsum(contrib, axis=0)))
        return out

    def _cumulative(self, coefs: list[np.ndarray], t: np.ndarray) -> np.ndarray:
        out = np.zeros((t.size, self.event_count))
        for j, (times, folded) in enumerate(self.folded_baselines):
            if times.size == 0:
                continue
            idx = np.searchsorted(times, t, side="right")
            rows = np.flatnonzero(idx > 0)
            if rows.size:
                out[rows, j] = _stieltjes(coefs[j][rows], folded[idx[rows] - 1])
        return out


@dataclass(eq=False)
class QrMnnModel(MnnModel):
    """Cause-specific quantile on the u = -log(tau) axis."""

    kind: ClassVar[str] = "qr"

    def quantile(self, x: CovariateBatch, tau, event: int) -> np.ndarray:
        """Q_j(tau, x) for event column `event`, shape (n,)."""
        tt = np.asarray(tau, dtype=np.float64)
        if np.isnan(tt).any() or (tt <= 0).any() or (tt >= 1).any():
            raise UsageError(f"tau must lie in (0, 1), got {tau}")
        self._check_event(event)
        u = row_times(-np.log(tt), len(x))
        c = self.coefficients(x)[event]
        return np.einsum("nk,nk->n", c, self.bases[event].integrate(u))

    def _check_event(self, event: int) -> None:
        if not 0 <= event < self.event_count:
            raise UsageError(f"Event column {event} outside [0, {self.event_count})")

    def _cumulative(self, coefs: list[np.ndarray], t: np.ndarray) -> np.ndarray:
        return np.column_stack(
            [
                b.inverse_weighted_integral_batch(c, t)
                for c, b in zip(coefs, self.bases, strict=True)
            ]
        )

    def hazard(self, x: CovariateBatch, t) -> np.ndarray:
        """lambda_j(t, x) = 1 / (dQ_j/du) at u = Lambda_j(t, x), right derivative at knots."""
        coefs = self.coefficients(x)
        tt = row_times(t, len(x))
        u = self._cumulative(coefs, tt)
        cols = []
        for j, (c, b) in enumerate(zip(coefs, self.bases, strict=True)):
            rate = np.einsum("nk,nk->n", c, b.evaluate(u[:, j]))
            with np.errstate(divide="ignore"):
                cols.append(1.0 / rate)
        return np.column_stack(cols)


@dataclass(eq=False)
class DhMnnModel(MnnModel):
    """Direct hazard with closed-form cumulative hazard."""

    kind: ClassVar[str] = "dh"

    def hazard(self, x: CovariateBatch, t) -> np.ndarray:
        coefs = self.coefficients(x)
        tt = row_times(t, len(x))
        return np.column_stack(
            [
                np.einsum("nk,nk->n", c, b.evaluate(tt))
                for c, b in zip(coefs, self.bases, strict=True)
            ]
        )

    def _cumulative(self, coefs: list[np.ndarray], t: np.ndarray) -> np.ndarray:
        return np.column_stack(
            [
                np.einsum("nk,nk->n", c, b.integrate(t))
                for c, b in zip(coefs, self.bases, strict=True)
            ]
        )


MODEL_TYPES: dict[str, type[MnnModel]] = {
    "ph": PhMnnModel,
    "qr": QrMnnModel,
    "dh": DhMnnModel,
}


def create_model(
    kind: str,
    params: NetworkParams,
    bases: list[BasisSet],
    positivity: PositivityMap | None = None,
) -> MnnModel:
    try:
        cls = MODEL_TYPES[kind]
    except KeyError:
        raise ConfigurationError(
            f"Unknown model kind '{kind}'. Allowed: {', '.join(MODEL_KINDS)}"
        ) from None
    return cls(params=params, bases=list(bases), positivity=positivity or PositivityMap())
