"""Marginal cumulative hazard ratios over sliding covariate windows.

For a window xi(w) = {i : |x_i[attr] - w| <= width / 2} and a time t:

    CHR_model(w) = log S_model(t | xi(w)) / log S_KM(t)
    CHR_KM(w)    = log S_KM(t | xi(w))    / log S_KM(t)

where S_model(t | xi(w)) averages the model survival over the window and
S_KM(t) is the population Kaplan-Meier estimate.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import UsageError
from ..estimation import SurvivalData, kaplan_meier
from .metrics import SurvivalCurveModel

logger = logging.getLogger(__name__)

# survival of a subgroup at the evaluation time
MarginalSurvival = Callable[[SurvivalData], float]


@dataclass(frozen=True)
class ChrSettings:
    attribute: int = 0
    width: float = 4.0
    targets: tuple[float, ...] = (-2.0, -1.0, 0.0, 1.0, 2.0)
    times: tuple[float, ...] = (2.0, 4.0, 6.0, 8.0)

    def __post_init__(self) -> None:
        if self.width <= 0:
            raise UsageError(f"Window width must be > 0, got {self.width}")
        if not self.targets or not self.times:
            raise UsageError("CHR needs at least one target value and one time")
        if any(t <= 0 for t in self.times):
            raise UsageError("CHR evaluation times must be > 0")


@dataclass(frozen=True)
class ChrCurve:
    """CHR per target value; NaN marks an empty or undefined window."""

    time: float
    targets: np.ndarray
    weights: np.ndarray
    model_chr: np.ndarray
    km_chr: np.ndarray
    missing: list[float] = field(default_factory=list)


def km_marginal_survival(t: float) -> MarginalSurvival:
    def fn(subset: SurvivalData) -> float:
        return float(kaplan_meier(subset)(t))

    return fn


def model_marginal_survival(model: SurvivalCurveModel, t: float) -> MarginalSurvival:
    def fn(subset: SurvivalData) -> float:
        return float(model.survival_curves(subset.covariates, [t])[:, 0].mean())

    return fn


def _log_ratio_base(value: float, base: float) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        return float(np.log(value) / np.log(base))


def marginal_chr(
    marginal: MarginalSurvival,
    data: SurvivalData,
    attribute: int,
    targets: Sequence[float],
    t: float,
    width: float = 4.0,
) -> ChrCurve:
    if t <= 0:
        raise UsageError(f"CHR time must be > 0, got {t}")
    if not 0 <= attribute < data.covariates.numeric.shape[1]:
        raise UsageError(f"No numeric covariate at column {attribute}")
    values = data.covariates.numeric[:, attribute]
    population = float(kaplan_meier(data)(t))

    targets = np.asarray(targets, dtype=np.float64)
    weights = np.zeros(targets.size)
    model_chr = np.full(targets.size, np.nan)
    km_chr = np.full(targets.size, np.nan)
    missing = []
    for i, w in enumerate(targets):
        members = np.flatnonzero(np.abs(values - w) <= width / 2.0)
        weights[i] = members.size
        if members.size == 0:
            missing.append(float(w))
            continue
        subset = data.take(members)
        km_chr[i] = _log_ratio_base(float(kaplan_meier(subset)(t)), population)
        model_chr[i] = _log_ratio_base(marginal(subset), population)
    if missing:
        logger.warning(f"Empty CHR window(s) at t={t:g} for targets {missing}")
    return ChrCurve(
        time=float(t),
        targets=targets,
        weights=weights,
        model_chr=model_chr,
        km_chr=km_chr,
        missing=missing,
    )
