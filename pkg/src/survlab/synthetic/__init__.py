from .generator import CensoringKind, SyntheticSpec, sample_dataset
from .hazards import (
    HORIZON,
    RATE_BOUND,
    oracle_survival,
    true_cumulative_hazards,
    true_cumulative_incidence,
    true_hazards,
    true_survival,
    true_survival_curves,
)

__all__ = [
    "HORIZON",
    "RATE_BOUND",
    "CensoringKind",
    "SyntheticSpec",
    "oracle_survival",
    "sample_dataset",
    "true_cumulative_hazards",
    "true_cumulative_incidence",
    "true_hazards",
    "true_survival",
    "true_survival_curves",
]
