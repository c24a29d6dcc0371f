from .mnn import (
    MODEL_KINDS,
    MODEL_TYPES,
    DhMnnModel,
    MnnModel,
    ModelKind,
    PhMnnModel,
    QrMnnModel,
    create_model,
    row_times,
)
from .positivity import POSITIVITY_KINDS, PositivityMap
from .step import StepFunction

__all__ = [
    "MODEL_KINDS",
    "MODEL_TYPES",
    "POSITIVITY_KINDS",
    "DhMnnModel",
    "MnnModel",
    "ModelKind",
    "PhMnnModel",
    "PositivityMap",
    "QrMnnModel",
    "StepFunction",
    "create_model",
    "row_times",
]
