from __future__ import annotations

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..estimation import SurvivalData
from .hazards import HORIZON, RATE_BOUND, true_hazards

logger = logging.getLogger(__name__)

CensoringKind = Literal["administrative", "uniform"]


class SyntheticSpec(BaseModel):
    """Sample size, seed and censoring of one synthetic benchmark draw.

    Administrative censoring at `horizon` always applies; `uniform` adds an
    independent U(0, horizon) censoring time.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(default=10_000, ge=0)
    seed: int = Field(default=0, ge=0)
    horizon: float = Field(default=HORIZON, gt=0)
    censoring: CensoringKind = "administrative"


def _thin(
    risk: int, x: np.ndarray, horizon: float, rng: np.random.Generator
) -> np.ndarray:
    """First event time of one risk per row by thinning; +inf past the horizon."""
    n = x.shape[0]
    t = np.zeros(n)
    out = np.full(n, np.inf)
    active = np.arange(n)
    while active.size:
        t[active] += rng.exponential(1.0 / RATE_BOUND, size=active.size)
        active = active[t[active] <= horizon]
        if not active.size:
            break
        u = rng.uniform(size=active.size)
        rate = true_hazards(t[active], x[active])[risk]
        accepted = u * RATE_BOUND <= rate
        out[active[accepted]] = t[active[accepted]]
        active = active[~accepted]
    return out


def sample_dataset(spec: SyntheticSpec) -> SurvivalData:
    """Covariates x ~ N(0, I_2); competing event times; first event wins."""
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    x = rng.standard_normal((n, 2))
    candidates = np.column_stack([_thin(r, x, spec.horizon, rng) for r in (0, 1)])
    first = candidates.argmin(axis=1) if n else np.zeros(0, dtype=np.int64)
    event_time = candidates.min(axis=1) if n else np.zeros(0)

    event = np.isfinite(event_time).astype(np.int64)
    time = np.where(event == 1, event_time, spec.horizon)
    if spec.censoring == "uniform":
        censor = rng.uniform(0.0, spec.horizon, size=n)
        censored = censor < time
        time = np.where(censored, censor, time)
        event = np.where(censored, 0, event)
    event_type = np.where(event == 1, first + 1, 0)

    logger.debug(
        f"Sampled n={n} seed={spec.seed}: {int(event.sum())} events, "
        f"{int((event_type == 1).sum())} of type 1"
    )
    return SurvivalData.from_arrays(
        time=time,
        event=event,
        event_type=event_type,
        numeric=x,
    )
