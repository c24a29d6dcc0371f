from __future__ import annotations

from dataclasses import dataclass

from ..estimation import LossTrace, SurvivalData, TrainConfig, train
from ..models import MnnModel, PositivityMap
from .config import ResolvedModel


@dataclass(frozen=True)
class ModelFitter:
    """Picklable (data, seed) -> fitted model, for parallel folds and benchmarks."""

    resolved: ResolvedModel
    train_config: TrainConfig

    def fit(self, data: SurvivalData, seed: int) -> tuple[MnnModel, LossTrace]:
        config = self.train_config.model_copy(update={"seed": seed})
        return train(
            self.resolved.kind,
            self.resolved.spec,
            self.resolved.bases,
            data,
            config,
            PositivityMap(self.resolved.positivity),
        )

    def __call__(self, data: SurvivalData, seed: int) -> MnnModel:
        model, _ = self.fit(data, seed)
        return model
