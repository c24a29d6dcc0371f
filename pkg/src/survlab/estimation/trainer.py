from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..basis import BasisSet
from ..errors import EstimationError, TrainingDivergedError
from ..models import MnnModel, PhMnnModel, PositivityMap, create_model
from ..nn import GradientBuffer, NetworkSpec, init_params
from .baseline import kalbfleisch_prentice_baseline
from .cox import cox_minibatch_objective, sample_cox_batches
from .likelihood import full_loglik_and_gradient
from .optim import Adam
from .records import SurvivalData

logger = logging.getLogger(__name__)

LossTrace = list[tuple[int, float]]


class TrainConfig(BaseModel):
    """Optimizer and mini-batch settings for one training run.

    `batch_size` is the general batch; `event_batch_size` is the
    uncensored-only batch used by the PH objective.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    learning_rate: float = Field(default=1e-3, gt=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    epsilon: float = Field(default=1e-8, gt=0)
    clip_norm: float | None = Field(default=10.0, gt=0)
    iterations: int = Field(default=2000, ge=0)
    batch_size: int = Field(default=256, ge=1)
    event_batch_size: int = Field(default=256, ge=1)
    seed: int = Field(default=0, ge=0)
    log_every: int = Field(default=100, ge=1)

    def optimizer(self) -> Adam:
        return Adam(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
            clip_norm=self.clip_norm,
        )


def _ascend(model: MnnModel, grads: GradientBuffer, optimizer: Adam) -> MnnModel:
    # the optimizer minimizes, the objective is maximized
    return model.with_params(optimizer.step(model.params, grads.map(np.negative)))


def cox_minibatch_step(
    model: PhMnnModel,
    data: SurvivalData,
    config: TrainConfig,
    rng: np.random.Generator,
    optimizer: Adam,
) -> tuple[PhMnnModel, float]:
    """One ascent step on the dual mini-batch partial likelihood."""
    general, events = sample_cox_batches(
        data, config.batch_size, config.event_batch_size, rng
    )
    value, grads = cox_minibatch_objective(
        model, data, general, events, mode="train", rng=rng
    )
    if not np.isfinite(value):
        return model, value
    return _ascend(model, grads, optimizer), value


def full_likelihood_step(
    model: MnnModel,
    data: SurvivalData,
    config: TrainConfig,
    rng: np.random.Generator,
    optimizer: Adam,
) -> tuple[MnnModel, float]:
    """One ascent step on the censored log-likelihood over a random mini-batch."""
    size = min(config.batch_size, len(data))
    idx = np.sort(rng.choice(len(data), size=size, replace=False))
    value, grads = full_loglik_and_gradient(
        model, data.take(idx), mode="train", rng=rng
    )
    if not np.isfinite(value):
        return model, value
    return _ascend(model, grads, optimizer), value


StepFn = Callable[
    [MnnModel, SurvivalData, TrainConfig, np.random.Generator, Adam],
    tuple[MnnModel, float],
]


def train(
    kind: str,
    spec: NetworkSpec,
    bases: list[BasisSet],
    data: SurvivalData,
    config: TrainConfig | None = None,
    positivity: PositivityMap | None = None,
) -> tuple[MnnModel, LossTrace]:
    """Fit a model by mini-batch gradient ascent.

    PH models maximize the partial likelihood and finish with baseline
    estimation; QR and DH models maximize the full censored likelihood.
    Deterministic for a given config.seed.
    """
    config = config or TrainConfig()
    if len(data) == 0:
        raise EstimationError("Training data is empty")

    params = init_params(spec, seed=config.seed)
    model = create_model(kind, params, bases, positivity)
    data.check_event_types(model.event_count)
    if isinstance(model, PhMnnModel) and data.uncensored.size == 0:
        raise EstimationError("PH training needs at least one uncensored subject")

    step: StepFn = cox_minibatch_step if isinstance(model, PhMnnModel) else full_likelihood_step  # type: ignore[assignment]
    optimizer = config.optimizer()
    rng = np.random.default_rng([config.seed, 1])
    trace: LossTrace = []

    logger.info(
        f"Training {kind} model: n={len(data)}, events={data.uncensored.size}, "
        f"iterations={config.iterations}, batch={config.batch_size}"
    )
    for it in range(1, config.iterations + 1):
        model, value = step(model, data, config, rng, optimizer)
        trace.append((it, value))
        if not np.isfinite(value) or not model.params.is_finite():
            logger.error(f"Training diverged at iteration {it} (objective={value})")
            raise TrainingDivergedError(
                f"Non-finite objective or parameters at iteration {it}", trace=trace
            )
        if it % config.log_every == 0 or it == config.iterations:
            recent = np.mean([v for _, v in trace[-config.log_every :]])
            logger.info(f"iter {it}/{config.iterations} objective={recent:.6f}")

    if isinstance(model, PhMnnModel):
        model = model.with_baselines(kalbfleisch_prentice_baseline(model, data))
    return model, trace
