from .autodiff import Tape, backward
from .inputs import CovariateBatch
from .network import (
    GradientBuffer,
    NetworkParams,
    NetworkSpec,
    forward,
    init_params,
)

__all__ = [
    "CovariateBatch",
    "GradientBuffer",
    "NetworkParams",
    "NetworkSpec",
    "Tape",
    "backward",
    "forward",
    "init_params",
]
