from .config import (
    CONFIG_KINDS,
    PRESETS,
    ConfigKind,
    ExperimentConfig,
    ResolvedModel,
    resolve_model,
)
from .fitting import ModelFitter
from .loader import ExperimentLoader

__all__ = [
    "CONFIG_KINDS",
    "PRESETS",
    "ConfigKind",
    "ExperimentConfig",
    "ExperimentLoader",
    "ModelFitter",
    "ResolvedModel",
    "resolve_model",
]
