from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import UsageError


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function of time.

    Holds `initial` before the first jump time. Cumulative hazards start at 0
    and are nondecreasing (a jump may be +inf, absorbing); survival curves
    start at 1 and are nonincreasing.
    """

    times: np.ndarray
    jumps: np.ndarray
    values: np.ndarray
    initial: float = 0.0

    @classmethod
    def from_jumps(cls, times, jumps, initial: float = 0.0) -> StepFunction:
        times = np.asarray(times, dtype=np.float64)
        jumps = np.asarray(jumps, dtype=np.float64)
        _check_times(times, jumps)
        return cls(
            times=times, jumps=jumps, values=initial + np.cumsum(jumps), initial=initial
        )

    @classmethod
    def from_values(cls, times, values, initial: float = 0.0) -> StepFunction:
        times = np.asarray(times, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        _check_times(times, values)
        jumps = np.diff(np.concatenate([[initial], values]))
        return cls(times=times, jumps=jumps, values=values, initial=initial)

    @classmethod
    def empty(cls, initial: float = 0.0) -> StepFunction:
        return cls.from_jumps(np.zeros(0), np.zeros(0), initial=initial)

    def __len__(self) -> int:
        return int(self.times.size)

    def __call__(self, t) -> np.ndarray | float:
        tt = np.asarray(t, dtype=np.float64)
        idx = np.searchsorted(self.times, tt, side="right")
        padded = np.concatenate([[self.initial], self.values])
        out = padded[idx]
        return float(out) if out.ndim == 0 else out

    @property
    def is_nondecreasing(self) -> bool:
        return bool(np.all(self.jumps >= 0))

    def to_dict(self) -> dict[str, Any]:
        return {
            "times": self.times.tolist(),
            "jumps": self.jumps.tolist(),
            "initial": self.initial,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> StepFunction:
        return cls.from_jumps(d["times"], d["jumps"], initial=float(d.get("initial", 0.0)))


def _check_times(times: np.ndarray, other: np.ndarray) -> None:
    if times.ndim != 1 or times.shape != other.shape:
        raise UsageError(
            f"Step function needs matching 1-D arrays, got {times.shape} and {other.shape}"
        )
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise UsageError("Step function jump times must be strictly increasing")
