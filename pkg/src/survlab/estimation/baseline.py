from __future__ import annotations

import logging

import numpy as np

from ..models import PhMnnModel, StepFunction
from .records import SurvivalData

logger = logging.getLogger(__name__)


def kalbfleisch_prentice_baseline(
    model: PhMnnModel, data: SurvivalData
) -> list[StepFunction]:
    """Cumulative baseline hazard per event type, one jump per distinct event time.

    At an event time s of type j with events D and risk set R = {m: T_m >= s}:

        alpha = sum_D omega_j(s, x) / sum_R omega_j(s, x)
        jump  = -log(1 - alpha) / mean_D omega_j(s, x)

    With a single event this is -log(1 - omega_n / sum_R omega) / omega_n.
    When D exhausts R the jump is +inf and survival drops to 0 after s.
    The network runs in eval mode.
    """
    if len(data) == 0:
        return [StepFunction.empty() for _ in model.bases]
    data.check_event_types(model.event_count)
    coefs = model.coefficients(data.covariates, mode="eval")
    order = np.argsort(data.time, kind="stable")
    sorted_time = data.time[order]

    baselines = []
    for j, (c, basis) in enumerate(zip(coefs, model.bases, strict=True)):
        events = np.flatnonzero((data.event == 1) & (data.event_type == j + 1))
        if events.size == 0:
            baselines.append(StepFunction.empty())
            continue
        times, group = np.unique(data.time[events], return_inverse=True)
        nu = basis.evaluate(times)

        tied = np.zeros((times.size, c.shape[1]))
        np.add.at(tied, group, c[events])
        n_tied = np.bincount(group, minlength=times.size)

        suffix = np.cumsum(c[order][::-1], axis=0)[::-1]
        start = np.searchsorted(sorted_time, times, side="left")
        n_risk = sorted_time.size - start

        event_mass = np.einsum("gk,gk->g", nu, tied)
        risk_mass = np.einsum("gk,gk->g", nu, suffix[start])
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = event_mass / risk_mass
            jumps = -np.log1p(-alpha) * n_tied / event_mass
        absorbing = (n_tied >= n_risk) | (alpha >= 1.0)
        jumps = np.where(absorbing, np.inf, jumps)
        if absorbing.any():
            logger.debug(
                f"Event type {j + 1}: absorbing baseline jump at t={times[absorbing][0]:.6g}"
            )
        baselines.append(StepFunction.from_jumps(times, jumps))
    return baselines
