from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from ..errors import ConfigurationError, DomainError, UsageError
from .knots import KnotGrid

BasisKind = Literal["piecewise_constant", "piecewise_linear"]
BASIS_KINDS: tuple[str, ...] = ("piecewise_constant", "piecewise_linear")


def _times(t) -> tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.ndim != 1:
        raise UsageError(f"Times must be a scalar or 1-D, got shape {arr.shape}")
    if np.isnan(arr).any():
        raise UsageError("Times must not be NaN")
    if (arr < 0).any():
        raise UsageError(f"Times must be >= 0, got min {arr.min()}")
    return arr, scalar


@dataclass(frozen=True)
class BasisSet:
    """Localized nonnegative time basis over a knot grid.

    piecewise_constant: K indicators, one per interval [T_{k-1}, T_k).
    piecewise_linear: K+1 hats, one per knot, boundary half-hats included.
    Past the last knot the last function holds 1 and every other is 0.
    """

    grid: KnotGrid
    kind: BasisKind = "piecewise_linear"

    def __post_init__(self) -> None:
        if self.kind not in BASIS_KINDS:
            raise ConfigurationError(
                f"Unknown basis kind '{self.kind}'. Allowed: {', '.join(BASIS_KINDS)}"
            )

    @classmethod
    def from_knots(cls, knots, kind: BasisKind = "piecewise_linear") -> BasisSet:
        return cls(KnotGrid.of(knots), kind)

    @classmethod
    def constant(cls, horizon: float) -> BasisSet:
        """One time-constant function: a single interval spanning [0, horizon]."""
        return cls(KnotGrid((0.0, float(horizon))), "piecewise_constant")

    @property
    def size(self) -> int:
        k = self.grid.interval_count
        return k if self.kind == "piecewise_constant" else k + 1

    # --- pointwise ----------------------------------------------------------

    def evaluate(self, t) -> np.ndarray:
        """nu(t): shape (size,) for scalar t, else (len(t), size)."""
        tt, scalar = _times(t)
        lo, hi, w = self.grid.lower, self.grid.upper, self.grid.widths
        col = tt[:, None]
        inside = (col >= lo) & (col < hi)
        beyond = tt >= self.grid.last
        if self.kind == "piecewise_constant":
            nu = inside.astype(np.float64)
            nu[:, -1] = np.where(beyond, 1.0, nu[:, -1])
        else:
            frac = np.where(inside, (col - lo) / w, 0.0)
            nu = np.zeros((tt.size, self.size))
            nu[:, :-1] += np.where(inside, 1.0 - frac, 0.0)
            nu[:, 1:] += frac
            nu[:, -1] += beyond
        return nu[0] if scalar else nu

    def slope(self, t) -> np.ndarray:
        """Right derivative d nu / dt; zero for piecewise-constant and past the grid."""
        tt, scalar = _times(t)
        out = np.zeros((tt.size, self.size))
        if self.kind == "piecewise_linear":
            lo, hi, w = self.grid.lower, self.grid.upper, self.grid.widths
            col = tt[:, None]
            inside = (col >= lo) & (col < hi)
            rate = np.where(inside, 1.0 / w, 0.0)
            out[:, :-1] -= rate
            out[:, 1:] += rate
        return out[0] if scalar else out

    def integrate(self, t) -> np.ndarray:
        """Closed-form integral of each function over [0, t]."""
        tt, scalar = _times(t)
        lo, w = self.grid.lower, self.grid.widths
        s = np.clip(tt[:, None] - lo, 0.0, w)
        tail = np.maximum(tt - self.grid.last, 0.0)
        if self.kind == "piecewise_constant":
            out = s.copy()
            # last indicator keeps accruing past the final knot
            out[:, -1] = np.maximum(tt - lo[-1], 0.0)
        else:
            rise = s * s / (2.0 * w)
            out = np.zeros((tt.size, self.size))
            out[:, 1:] += rise
            out[:, :-1] += s - rise
            out[:, -1] += tail
        return out[0] if scalar else out

    # --- inverse ------------------------------------------------------------

    def inverse_weighted_integral(self, weights, target: float) -> float:
        """Smallest t with sum_k weights_k * integral_0^t nu_k = target."""
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size != self.size:
            raise UsageError(f"Expected {self.size} weights, got shape {w.shape}")
        return float(self.inverse_weighted_integral_batch(w[None, :], [target])[0])

    def inverse_weighted_integral_batch(self, weights, targets) -> np.ndarray:
        """Row-wise inverse for weights (m, size) and targets (m,)."""
        W = np.atleast_2d(np.asarray(weights, dtype=np.float64))
        y = np.atleast_1d(np.asarray(targets, dtype=np.float64))
        if W.shape != (y.size, self.size):
            raise UsageError(
                f"Weights shape {W.shape} does not match ({y.size}, {self.size})"
            )
        if not np.isfinite(W).all() or (W < 0).any():
            raise UsageError("Weights must be finite and >= 0")
        if np.isnan(y).any() or (y < 0).any():
            raise UsageError("Targets must be >= 0")

        knots = self.grid.array
        mass = W @ self.integrate(knots).T  # (m, K+1), nondecreasing per row
        total = mass[:, -1]
        tail_rate = W[:, -1]
        out = np.zeros(y.size)

        beyond = y > total
        unreachable = beyond & (tail_rate <= 0.0)
        if unreachable.any():
            i = int(np.flatnonzero(unreachable)[0])
            raise DomainError(
                f"Target {y[i]:.6g} exceeds attainable supremum {total[i]:.6g} "
                "(zero weight past the last knot)",
                supremum=float(total[i]),
            )
        if beyond.any():
            out[beyond] = self.grid.last + (y[beyond] - total[beyond]) / tail_rate[beyond]

        inner = ~beyond & (y > 0.0)
        if inner.any():
            rows = np.flatnonzero(inner)
            # first knot whose accumulated mass reaches the target
            idx = (mass[rows] < y[rows, None]).sum(axis=1)
            j = idx - 1
            left = knots[j]
            width = self.grid.widths[j]
            r = y[rows] - mass[rows, j]
            a = np.einsum("mk,mk->m", W[rows], self.evaluate(left))
            b = np.einsum("mk,mk->m", W[rows], self.slope(left))
            disc = np.sqrt(np.maximum(a * a + 2.0 * b * r, 0.0))
            step = 2.0 * r / (a + disc)
            out[rows] = left + np.clip(step, 0.0, width)
        return out

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "knots": list(self.grid.knots)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> BasisSet:
        return cls(KnotGrid.of(d["knots"]), d.get("kind", "piecewise_linear"))
