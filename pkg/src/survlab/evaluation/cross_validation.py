from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from joblib import Parallel, delayed

from ..errors import UsageError, error_class_of
from ..estimation import SurvivalData
from .chr import ChrSettings, marginal_chr, model_marginal_survival
from .metrics import SurvivalOracle, integrated_squared_error, rmse_urmse_bias
from .splits import get_repeated_kfold_splits

logger = logging.getLogger(__name__)

# (training data, seed) -> fitted model exposing survival_curves
Fitter = Callable[[SurvivalData, int], Any]

REPORT_METRICS = ("mse", "rmse", "urmse", "abs_bias", "ise")


@dataclass(frozen=True)
class MetricRow:
    metric: str
    config: str
    time: float
    window: float | None
    value: float


@dataclass(frozen=True)
class RunFailure:
    config: str
    repetition: int
    fold: int
    error_class: str
    message: str


@dataclass(frozen=True)
class EvalReport:
    """One metric of one config across runs.

    `values` is (runs, times); `max_over_time` holds each run's maximum and
    `mean` / `half_width` summarize it with a normal 95% interval.
    """

    metric: str
    config: str
    times: np.ndarray
    values: np.ndarray
    max_over_time: np.ndarray
    mean: float
    half_width: float
    n_runs: int
    n_failed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_over_time": self.mean,
            "half_width": self.half_width,
            "n_runs": self.n_runs,
            "n_failed": self.n_failed,
        }


@dataclass
class CrossValidationResult:
    runs: list[tuple[int, int, list[MetricRow]]] = field(default_factory=list)
    failures: list[RunFailure] = field(default_factory=list)
    reports: list[EvalReport] = field(default_factory=list)

    def summary(self) -> dict[str, dict[str, dict[str, Any]]]:
        out: dict[str, dict[str, dict[str, Any]]] = {}
        for r in self.reports:
            out.setdefault(r.config, {})[r.metric] = r.to_dict()
        return out


def evaluate_model(
    model: Any,
    data: SurvivalData,
    settings: ChrSettings,
    config_name: str = "model",
    oracle: SurvivalOracle | None = None,
    horizon: float = 10.0,
    step: float = 0.1,
) -> list[MetricRow]:
    """CHR curves and their error decomposition per time; ISE when an oracle exists."""
    rows: list[MetricRow] = []
    for t in settings.times:
        curve = marginal_chr(
            model_marginal_survival(model, t),
            data,
            settings.attribute,
            settings.targets,
            t,
            width=settings.width,
        )
        for w, m, k in zip(curve.targets, curve.model_chr, curve.km_chr, strict=True):
            rows.append(MetricRow("chr_model", config_name, t, float(w), float(m)))
            rows.append(MetricRow("chr_km", config_name, t, float(w), float(k)))
        try:
            dec = rmse_urmse_bias(curve.model_chr, curve.km_chr, curve.weights)
            values = {
                "mse": dec.mse,
                "rmse": dec.rmse,
                "urmse": dec.urmse,
                "bias": dec.bias,
                "abs_bias": dec.abs_bias,
            }
        except UsageError as e:
            logger.warning(f"{config_name}: no error decomposition at t={t:g}: {e}")
            values = dict.fromkeys(("mse", "rmse", "urmse", "bias", "abs_bias"), np.nan)
        for name, value in values.items():
            rows.append(MetricRow(name, config_name, t, None, float(value)))
    if oracle is not None:
        ise = integrated_squared_error(model, data, oracle, horizon=horizon, step=step)
        rows.append(MetricRow("ise", config_name, horizon, None, ise))
    return rows


def _run_fold(
    name: str,
    fitter: Fitter,
    data: SurvivalData,
    rep: int,
    fold: int,
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    seed: int,
    settings: ChrSettings,
    oracle: SurvivalOracle | None,
    horizon: float,
    step: float,
) -> tuple[int, int, list[MetricRow]] | RunFailure:
    try:
        model = fitter(data.take(train_idx), seed)
        rows = evaluate_model(
            model, data.take(test_idx), settings, name, oracle, horizon, step
        )
        return rep, fold, rows
    except Exception as e:
        logger.warning(f"{name}: rep {rep} fold {fold} failed: {e}")
        return RunFailure(name, rep, fold, error_class_of(e), str(e))


def build_reports(
    runs: list[tuple[int, int, list[MetricRow]]],
    failures: list[RunFailure],
    configs: list[str],
) -> list[EvalReport]:
    reports = []
    for config in configs:
        n_failed = sum(1 for f in failures if f.config == config)
        for metric in REPORT_METRICS:
            per_run = []
            for _, _, rows in runs:
                mine = [r for r in rows if r.config == config and r.metric == metric]
                if mine:
                    per_run.append(mine)
            if not per_run:
                continue
            times = np.array([r.time for r in per_run[0]])
            values = np.array([[r.value for r in rows] for rows in per_run])
            maxima = np.array(
                [np.nanmax(v) if np.isfinite(v).any() else np.nan for v in values]
            )
            finite = maxima[np.isfinite(maxima)]
            n = finite.size
            mean = float(finite.mean()) if n else float("nan")
            half = float(1.96 * finite.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
            reports.append(
                EvalReport(
                    metric=metric,
                    config=config,
                    times=times,
                    values=values,
                    max_over_time=maxima,
                    mean=mean,
                    half_width=half,
                    n_runs=n,
                    n_failed=n_failed,
                )
            )
    return reports


def cross_validate(
    data: SurvivalData,
    fitters: Mapping[str, Fitter],
    settings: ChrSettings,
    folds: int = 5,
    repetitions: int = 1,
    seed: int = 0,
    threads: int = 1,
    oracle: SurvivalOracle | None = None,
    horizon: float = 10.0,
    step: float = 0.1,
) -> CrossValidationResult:
    """Repeated shuffled k-fold: train each config on k-1 folds, score the held-out one."""
    splits = get_repeated_kfold_splits(len(data), folds, repetitions, seed)
    jobs = [
        delayed(_run_fold)(
            name,
            fitter,
            data,
            rep,
            fold,
            train_idx,
            test_idx,
            seed + rep * folds + fold,
            settings,
            oracle,
            horizon,
            step,
        )
        for rep, fold, train_idx, test_idx in splits
        for name, fitter in fitters.items()
    ]
    logger.info(
        f"Cross-validating {len(fitters)} config(s): {repetitions}x{folds} folds, "
        f"{len(jobs)} runs on {threads} worker(s)"
    )
    outcomes = Parallel(n_jobs=threads)(jobs)

    result = CrossValidationResult()
    for outcome in outcomes:
        if isinstance(outcome, RunFailure):
            result.failures.append(outcome)
        else:
            result.runs.append(outcome)
    result.reports = build_reports(result.runs, result.failures, list(fitters))
    return result
