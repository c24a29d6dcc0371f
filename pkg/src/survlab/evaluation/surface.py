from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import pandas as pd

from ..errors import UsageError
from ..models import MnnModel
from ..nn import CovariateBatch
from ..synthetic import true_cumulative_hazards


def _grid_batch(base: CovariateBatch, attribute: int, values: np.ndarray) -> CovariateBatch:
    if len(base) != 1:
        raise UsageError("Surface base covariates must be a single record")
    if not 0 <= attribute < base.numeric.shape[1]:
        raise UsageError(f"No numeric covariate at column {attribute}")
    return base.take(np.zeros(values.size, dtype=np.int64)).with_numeric(attribute, values)


def cumulative_hazard_surface(
    model: MnnModel,
    base: CovariateBatch,
    attribute: int,
    values: Sequence[float],
    times: Sequence[float],
    event: int = 1,
) -> pd.DataFrame:
    """Lambda_event(t, x) over a grid of one numeric covariate and time.

    Other covariates stay at `base`. Long format: value, time, cumulative_hazard.
    """
    if not 1 <= event <= model.event_count:
        raise UsageError(f"Event type {event} outside 1..{model.event_count}")
    grid = np.asarray(values, dtype=np.float64)
    t = np.asarray(times, dtype=np.float64)
    batch = _grid_batch(base, attribute, grid)
    curves = model.cumulative_hazard_curves(batch, t)[:, :, event - 1]
    return pd.DataFrame(
        {
            "value": np.repeat(grid, t.size),
            "time": np.tile(t, grid.size),
            "cumulative_hazard": curves.reshape(-1),
        }
    )


def oracle_cumulative_hazard_surface(
    base: CovariateBatch,
    attribute: int,
    values: Sequence[float],
    times: Sequence[float],
    event: int = 1,
) -> pd.DataFrame:
    """Same layout as `cumulative_hazard_surface`, from the synthetic ground truth."""
    if event not in (1, 2):
        raise UsageError(f"Synthetic benchmark has event types 1 and 2, got {event}")
    grid = np.asarray(values, dtype=np.float64)
    t = np.asarray(times, dtype=np.float64)
    x = _grid_batch(base, attribute, grid).numeric[:, :2]
    cum = true_cumulative_hazards(t[None, :], x[:, None, :])[event - 1]
    return pd.DataFrame(
        {
            "value": np.repeat(grid, t.size),
            "time": np.tile(t, grid.size),
            "cumulative_hazard": cum.reshape(-1),
        }
    )
