"""Partial likelihood for the PH family.

Both objectives return the normalized log partial likelihood and its gradient
with respect to the network parameters. Gradients are formed in coefficient
space (dL/dc), pushed through h'(psi) and then through the network tape.
Ties share a risk set: subject m is at risk for n whenever T_m >= T_n.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import EstimationError
from ..models import PhMnnModel
from ..nn import GradientBuffer, backward
from ..nn.network import Mode
from .records import SurvivalData

logger = logging.getLogger(__name__)


def _risk_start(sorted_time: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Position of the first sorted subject still at risk at each t."""
    return np.searchsorted(sorted_time, t, side="left")


def cox_partial_loglik_and_gradient(
    model: PhMnnModel,
    data: SurvivalData,
    mode: Mode = "eval",
    rng: np.random.Generator | None = None,
) -> tuple[float, GradientBuffer]:
    """Full-data log partial likelihood, averaged over uncensored subjects."""
    n_events = int(data.event.sum())
    if n_events == 0:
        raise EstimationError("Partial likelihood needs at least one uncensored subject")

    psi, tape = model.network_outputs(data.covariates, mode=mode, rng=rng)
    coefs = model.split_coefficients(psi)
    order = np.argsort(data.time, kind="stable")
    sorted_time = data.time[order]

    total = 0.0
    coef_grads = []
    for j, (c, basis) in enumerate(zip(coefs, model.bases, strict=True)):
        grad = np.zeros_like(c)
        events = np.flatnonzero((data.event == 1) & (data.event_type == j + 1))
        if events.size == 0:
            coef_grads.append(grad)
            continue
        nu = basis.evaluate(data.time[events])
        own = np.einsum("nk,nk->n", c[events], nu)

        # suffix[i] = sum of coefficients of sorted subjects i.. (the risk set)
        suffix = np.cumsum(c[order][::-1], axis=0)[::-1]
        start = _risk_start(sorted_time, data.time[events])
        denom = np.einsum("nk,nk->n", nu, suffix[start])
        total += float(np.sum(np.log(own) - np.log(denom)))

        grad[events] += nu / own[:, None]
        # every subject at sorted position >= start[n] gets -nu_n / denom_n
        acc = np.zeros_like(c)
        np.add.at(acc, start, nu / denom[:, None])
        grad[order] -= np.cumsum(acc, axis=0)
        coef_grads.append(grad)

    value = total / n_events
    cotangent = model.output_cotangent([g / n_events for g in coef_grads], psi)
    return value, backward(tape, cotangent)


def cox_partial_loglik(model: PhMnnModel, data: SurvivalData) -> float:
    value, _ = cox_partial_loglik_and_gradient(model, data)
    return value


def cox_minibatch_objective(
    model: PhMnnModel,
    data: SurvivalData,
    general_idx: np.ndarray,
    event_idx: np.ndarray,
    mode: Mode = "train",
    rng: np.random.Generator | None = None,
) -> tuple[float, GradientBuffer]:
    """Dual mini-batch estimate of the partial likelihood and its gradient.

    The risk-set sum for each event subject n in `event_idx` is replaced by
    the mean of omega(T_n, x_m) over general-batch members with T_m >= T_n,
    scaled by the full-data risk-set size. Both batches go through one
    forward pass so gradients flow through each.
    """
    general_idx = np.asarray(general_idx, dtype=np.int64)
    event_idx = np.asarray(event_idx, dtype=np.int64)
    if event_idx.size == 0:
        raise EstimationError("Mini-batch has no uncensored subjects")
    if (data.event[event_idx] != 1).any():
        raise EstimationError("Event batch must contain only uncensored subjects")

    g = general_idx.size
    batch = data.covariates.take(np.concatenate([general_idx, event_idx]))
    psi, tape = model.network_outputs(batch, mode=mode, rng=rng)
    coefs = model.split_coefficients(psi)

    sorted_time = np.sort(data.time)
    t_general = data.time[general_idx]
    total = 0.0
    coef_grads = []
    for j, (c, basis) in enumerate(zip(coefs, model.bases, strict=True)):
        grad = np.zeros_like(c)
        rows = np.flatnonzero(data.event_type[event_idx] == j + 1)
        if rows.size == 0:
            coef_grads.append(grad)
            continue
        t_event = data.time[event_idx[rows]]
        nu = basis.evaluate(t_event)
        c_general, c_event = c[:g], c[g + rows]

        mask = (t_general[None, :] >= t_event[:, None]).astype(np.float64)
        count = mask.sum(axis=1)
        live = count > 0
        if not live.all():
            logger.debug(
                f"Skipping {int((~live).sum())} event(s) of type {j + 1}: "
                "no general-batch member in their risk set"
            )
        rows, t_event, nu, c_event = rows[live], t_event[live], nu[live], c_event[live]
        mask, count = mask[live], count[live]
        if rows.size == 0:
            coef_grads.append(grad)
            continue

        own = np.einsum("nk,nk->n", c_event, nu)
        cross = nu @ c_general.T  # omega_j(T_n, x_m)
        mean = np.einsum("nm,nm->n", mask, cross) / count
        at_risk = sorted_time.size - np.searchsorted(sorted_time, t_event, side="left")
        total += float(np.sum(np.log(own) - np.log(at_risk * mean)))

        grad[g + rows] += nu / own[:, None]
        grad[:g] -= mask.T @ (nu / (count * mean)[:, None])
        coef_grads.append(grad)

    scale = float(event_idx.size)
    cotangent = model.output_cotangent([gr / scale for gr in coef_grads], psi)
    return total / scale, backward(tape, cotangent)


def sample_cox_batches(
    data: SurvivalData,
    batch_size: int,
    event_batch_size: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Independent general and uncensored-only batches, without replacement."""
    uncensored = data.uncensored
    if uncensored.size == 0:
        raise EstimationError("Partial likelihood needs at least one uncensored subject")
    general = rng.choice(len(data), size=min(batch_size, len(data)), replace=False)
    events = rng.choice(
        uncensored, size=min(event_batch_size, uncensored.size), replace=False
    )
    return np.sort(general), np.sort(events)
