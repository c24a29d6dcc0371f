from __future__ import annotations

import numpy as np

from ..errors import EstimationError
from ..models import StepFunction
from .records import SurvivalData


def kaplan_meier(data: SurvivalData, event_type: int | None = None) -> StepFunction:
    """Product-limit survival curve; ties are grouped at each distinct time.

    With `event_type`, events of other types count as censored.
    """
    if len(data) == 0:
        raise EstimationError("Kaplan-Meier needs at least one record")
    observed = data.event == 1
    if event_type is not None:
        observed &= data.event_type == event_type
    if not observed.any():
        return StepFunction.empty(initial=1.0)

    sorted_time = np.sort(data.time)
    times, deaths = np.unique(data.time[observed], return_counts=True)
    at_risk = sorted_time.size - np.searchsorted(sorted_time, times, side="left")
    survival = np.cumprod(1.0 - deaths / at_risk)
    return StepFunction.from_values(times, survival, initial=1.0)
