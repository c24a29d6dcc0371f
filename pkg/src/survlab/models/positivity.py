from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import expit

from ..errors import ConfigurationError

PositivityKind = Literal["exp", "softplus"]
POSITIVITY_KINDS: tuple[str, ...] = ("exp", "softplus")

# exp input is clamped to this range before exponentiation
EXP_CLAMP = 30.0


@dataclass(frozen=True)
class PositivityMap:
    """Strictly positive, nondecreasing h applied to each network output."""

    kind: PositivityKind = "exp"

    def __post_init__(self) -> None:
        if self.kind not in POSITIVITY_KINDS:
            raise ConfigurationError(
                f"Unknown positivity map '{self.kind}'. "
                f"Allowed: {', '.join(POSITIVITY_KINDS)}"
            )

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        if self.kind == "exp":
            return np.exp(np.clip(y, -EXP_CLAMP, EXP_CLAMP))
        return np.logaddexp(0.0, y)

    def derivative(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        if self.kind == "exp":
            inside = np.abs(y) <= EXP_CLAMP
            return np.where(inside, np.exp(np.clip(y, -EXP_CLAMP, EXP_CLAMP)), 0.0)
        return expit(y)
