"""Ground truth for the two-covariate, two-risk benchmark.

lambda_1(t, x) = 0.03 (1 + 0.5 cos(2 pi t / 10)) exp(atan(2 x0) [t < 5] + atan(2 x1) [t > 5])
lambda_2(t, x) = 0.03 (1 + 0.5 sin(2 pi t / 10)) exp(sin(x1) [t < 5] + sin(x0) [t > 5])

Both indicators are strict, so at t = 5 only the baseline factor remains.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

BASE_RATE = 0.03
SWITCH_TIME = 5.0
PERIOD = 10.0
HORIZON = 10.0
# atan(.) < pi/2 and sin(.) <= 1, and the periodic factor is at most 1.5
RATE_BOUND = 1.5 * BASE_RATE * np.exp(np.pi / 2)


def _xy(x) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(x, dtype=np.float64)
    return arr[..., 0], arr[..., 1]


def true_hazards(t, x) -> tuple[np.ndarray, np.ndarray]:
    """Cause-specific hazards; t broadcasts against the leading axes of x (..., 2)."""
    t = np.asarray(t, dtype=np.float64)
    x0, x1 = _xy(x)
    early = t < SWITCH_TIME
    late = t > SWITCH_TIME
    phase = 2.0 * np.pi * t / PERIOD
    lam1 = (
        BASE_RATE
        * (1.0 + 0.5 * np.cos(phase))
        * np.exp(np.arctan(2.0 * x0) * early + np.arctan(2.0 * x1) * late)
    )
    lam2 = (
        BASE_RATE
        * (1.0 + 0.5 * np.sin(phase))
        * np.exp(np.sin(x1) * early + np.sin(x0) * late)
    )
    return lam1, lam2


def _periodic_integral_cos(t):
    return t + (2.5 / np.pi) * np.sin(np.pi * t / 5.0)


def _periodic_integral_sin(t):
    return t + (2.5 / np.pi) * (1.0 - np.cos(np.pi * t / 5.0))


def true_cumulative_hazards(t, x) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form Lambda_1, Lambda_2 (piecewise around the switch time)."""
    t = np.asarray(t, dtype=np.float64)
    x0, x1 = _xy(x)
    before = np.minimum(t, SWITCH_TIME)
    after = np.maximum(t, SWITCH_TIME)
    p1 = _periodic_integral_cos
    p2 = _periodic_integral_sin
    cum1 = BASE_RATE * (
        np.exp(np.arctan(2.0 * x0)) * p1(before)
        + np.exp(np.arctan(2.0 * x1)) * (p1(after) - p1(SWITCH_TIME))
    )
    cum2 = BASE_RATE * (
        np.exp(np.sin(x1)) * p2(before)
        + np.exp(np.sin(x0)) * (p2(after) - p2(SWITCH_TIME))
    )
    return cum1, cum2


def true_survival_curves(x, times) -> np.ndarray:
    """S(t, x) for rows x (n, 2) on a time grid, shape (n, G), closed form."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    grid = np.atleast_1d(np.asarray(times, dtype=np.float64))
    cum1, cum2 = true_cumulative_hazards(grid[None, :], x[:, None, :])
    return np.exp(-(cum1 + cum2))


def _total_hazard(s: float, x: np.ndarray) -> float:
    lam1, lam2 = true_hazards(s, x)
    return float(lam1 + lam2)


def true_survival(t: float, x) -> float:
    """exp(-int_0^t (lambda_1 + lambda_2)) by adaptive quadrature."""
    t = float(t)
    x = np.asarray(x, dtype=np.float64)
    if t <= 0.0:
        return 1.0
    points = [SWITCH_TIME] if t > SWITCH_TIME else None
    integral, _ = quad(_total_hazard, 0.0, t, args=(x,), points=points, epsabs=1e-9)
    return float(np.exp(-integral))


def true_cumulative_incidence(t: float, x, event: int) -> float:
    """P(T <= t, J = event | x) = int_0^t lambda_event(s, x) S(s, x) ds."""
    x = np.asarray(x, dtype=np.float64)

    def density(s: float) -> float:
        lam = true_hazards(s, x)[event - 1]
        cum1, cum2 = true_cumulative_hazards(s, x)
        return float(lam * np.exp(-(cum1 + cum2)))

    if t <= 0.0:
        return 0.0
    points = [SWITCH_TIME] if t > SWITCH_TIME else None
    value, _ = quad(density, 0.0, float(t), points=points, epsabs=1e-9)
    return float(value)


def oracle_survival(x, times) -> np.ndarray:
    """Survival oracle over a covariate batch whose first two numeric columns are x."""
    return true_survival_curves(x.numeric[:, :2], times)
