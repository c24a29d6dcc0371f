from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from scipy.integrate import trapezoid

from ..errors import UsageError
from ..estimation import SurvivalData
from ..nn import CovariateBatch

logger = logging.getLogger(__name__)

SurvivalOracle = Callable[[CovariateBatch, np.ndarray], np.ndarray]


class SurvivalCurveModel(Protocol):
    def survival_curves(self, x: CovariateBatch, times) -> np.ndarray: ...


def time_grid(horizon: float, step: float) -> np.ndarray:
    count = int(round(horizon / step))
    return np.linspace(0.0, horizon, count + 1)


def integrated_squared_error(
    model: SurvivalCurveModel,
    data: SurvivalData,
    oracle: SurvivalOracle | None,
    horizon: float = 10.0,
    step: float = 0.1,
) -> float:
    """Mean over subjects of (1/horizon) int_0^horizon (S_model - S_true)^2 dt.

    Trapezoidal rule on a regular grid of the given step.
    """
    if oracle is None:
        raise UsageError("Integrated squared error needs a ground-truth survival oracle")
    if len(data) == 0:
        raise UsageError("Integrated squared error needs at least one subject")
    grid = time_grid(horizon, step)
    fitted = model.survival_curves(data.covariates, grid)
    truth = oracle(data.covariates, grid)
    per_subject = trapezoid((fitted - truth) ** 2, grid, axis=1) / horizon
    return float(per_subject.mean())


@dataclass(frozen=True)
class ErrorDecomposition:
    """Weighted error of log CHR ratios over windows.

    mse is the weighted mean of e^2; rmse its square root;
    rmse^2 = urmse^2 + bias^2.
    """

    mse: float
    rmse: float
    urmse: float
    bias: float
    abs_bias: float
    n_windows: int
    n_excluded: int


def rmse_urmse_bias(model_chr, km_chr, weights) -> ErrorDecomposition:
    model_chr = np.asarray(model_chr, dtype=np.float64)
    km_chr = np.asarray(km_chr, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if not (model_chr.shape == km_chr.shape == weights.shape):
        raise UsageError(
            f"CHR curves and weights disagree: {model_chr.shape}, "
            f"{km_chr.shape}, {weights.shape}"
        )
    if (weights < 0).any():
        raise UsageError("Window weights must be >= 0")

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = model_chr / km_chr
        valid = np.isfinite(ratio) & (ratio > 0) & (weights > 0)
        e = np.log(np.where(valid, ratio, 1.0))
    excluded = int((~valid & (weights > 0)).sum())
    if excluded:
        logger.warning(f"Excluded {excluded} window(s) with undefined log CHR ratio")
    if not valid.any():
        raise UsageError("No window has a positive weight and a defined CHR ratio")

    p = weights[valid] / weights[valid].sum()
    e = e[valid]
    mse = float(np.sum(p * e * e))
    bias = float(np.sum(p * e))
    urmse = float(np.sqrt(np.sum(p * (e - bias) ** 2)))
    return ErrorDecomposition(
        mse=mse,
        rmse=float(np.sqrt(mse)),
        urmse=urmse,
        bias=bias,
        abs_bias=abs(bias),
        n_windows=int(valid.sum()),
        n_excluded=excluded,
    )
