from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError

# Synthetic benchmark grids: time knots every 2 units on [0, 10]; quantile
# knots on the -log(tau) axis with the origin prepended.
DEFAULT_TIME_KNOTS: tuple[float, ...] = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
DEFAULT_QUANTILE_KNOTS: tuple[float, ...] = (0.0, 0.01, 0.03, 0.06, 0.1, 0.2)


@dataclass(frozen=True)
class KnotGrid:
    """Strictly increasing knots [T_0, ..., T_K] with T_0 >= 0."""

    knots: tuple[float, ...]

    def __post_init__(self) -> None:
        knots = tuple(float(k) for k in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2:
            raise ConfigurationError(f"Knot grid needs at least 2 knots, got {knots}")
        arr = np.asarray(knots)
        if not np.isfinite(arr).all():
            raise ConfigurationError(f"Knots must be finite: {knots}")
        if arr[0] < 0:
            raise ConfigurationError(f"First knot must be >= 0, got {arr[0]}")
        if np.any(np.diff(arr) <= 0):
            raise ConfigurationError(f"Knots must be strictly increasing: {knots}")

    @classmethod
    def regular(cls, start: float, stop: float, step: float) -> KnotGrid:
        count = int(round((stop - start) / step))
        return cls(tuple(start + i * step for i in range(count + 1)))

    @classmethod
    def of(cls, knots: Sequence[float]) -> KnotGrid:
        return cls(tuple(knots))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.knots, dtype=np.float64)

    @property
    def lower(self) -> np.ndarray:
        return self.array[:-1]

    @property
    def upper(self) -> np.ndarray:
        return self.array[1:]

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.array)

    @property
    def interval_count(self) -> int:
        return len(self.knots) - 1

    @property
    def last(self) -> float:
        return self.knots[-1]
