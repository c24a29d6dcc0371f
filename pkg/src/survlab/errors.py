from __future__ import annotations


class SurvLabError(Exception):
    """Base error. `error_class` is the stable token printed by the CLI."""

    error_class = "survlab-error"


class ConfigurationError(SurvLabError):
    """Invalid network spec, basis grid, or experiment configuration."""

    error_class = "configuration-error"


class ConfigNotFoundError(ConfigurationError):
    error_class = "config-not-found"


class DataError(SurvLabError):
    """Raised when covariates or survival records fail validation."""

    error_class = "data-error"


class DatasetNotFoundError(DataError):
    error_class = "dataset-not-found"


class UsageError(SurvLabError):
    error_class = "usage-error"


class DomainError(SurvLabError):
    """A target outside the attainable range of a monotone map."""

    error_class = "domain-error"

    def __init__(self, message: str, supremum: float | None = None):
        super().__init__(message)
        self.supremum = supremum


class StateError(SurvLabError):
    error_class = "state-error"


class EstimationError(SurvLabError):
    error_class = "estimation-error"

    def __init__(self, message: str, record_index: int | None = None):
        super().__init__(message)
        self.record_index = record_index


class TrainingDivergedError(EstimationError):
    error_class = "training-diverged"

    def __init__(self, message: str, trace: list[tuple[int, float]] | None = None):
        super().__init__(message)
        self.trace: list[tuple[int, float]] = trace or []


class ModelFileError(SurvLabError):
    error_class = "model-file-error"


def error_class_of(exc: BaseException) -> str:
    """Machine token for any exception; non-package errors map to internal-error."""
    if isinstance(exc, SurvLabError):
        return exc.error_class
    if isinstance(exc, FileNotFoundError):
        return "file-not-found"
    return "internal-error"

