from .benchmark import ise_benchmark, summarize_ise
from .chr import (
    ChrCurve,
    ChrSettings,
    km_marginal_survival,
    marginal_chr,
    model_marginal_survival,
)
from .cross_validation import (
    REPORT_METRICS,
    CrossValidationResult,
    EvalReport,
    Fitter,
    MetricRow,
    RunFailure,
    build_reports,
    cross_validate,
    evaluate_model,
)
from .metrics import (
    ErrorDecomposition,
    SurvivalOracle,
    integrated_squared_error,
    rmse_urmse_bias,
    time_grid,
)
from .splits import get_repeated_kfold_splits
from .surface import cumulative_hazard_surface, oracle_cumulative_hazard_surface

__all__ = [
    "REPORT_METRICS",
    "ChrCurve",
    "ChrSettings",
    "CrossValidationResult",
    "ErrorDecomposition",
    "EvalReport",
    "Fitter",
    "MetricRow",
    "RunFailure",
    "SurvivalOracle",
    "build_reports",
    "cross_validate",
    "cumulative_hazard_surface",
    "evaluate_model",
    "get_repeated_kfold_splits",
    "integrated_squared_error",
    "ise_benchmark",
    "km_marginal_survival",
    "marginal_chr",
    "model_marginal_survival",
    "oracle_cumulative_hazard_surface",
    "rmse_urmse_bias",
    "summarize_ise",
    "time_grid",
]
