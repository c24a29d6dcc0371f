"""Censored competing-risks log-likelihood for the QR and DH families.

L = mean_n [ E_n log lambda_{j_n}(T_n, x_n) - sum_j Lambda_j(T_n, x_n) ]
"""

from __future__ import annotations

import numpy as np

from ..errors import EstimationError
from ..models import DhMnnModel, MnnModel, QrMnnModel
from ..nn import GradientBuffer, backward
from ..nn.network import Mode
from .records import SurvivalData


def _dh_terms(
    model: DhMnnModel, coefs: list[np.ndarray], data: SurvivalData, events: list[np.ndarray]
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Per-row contributions and dL/dc for a direct-hazard model."""
    rows = np.zeros(len(data))
    grads = []
    for j, (c, basis) in enumerate(zip(coefs, model.bases, strict=True)):
        integral = basis.integrate(data.time)
        rows -= np.einsum("nk,nk->n", c, integral)
        grad = -integral
        hit = events[j]
        if hit.size:
            nu = basis.evaluate(data.time[hit])
            rate = np.einsum("nk,nk->n", c[hit], nu)
            _guard_zero(rate, hit)
            rows[hit] += np.log(rate)
            grad[hit] += nu / rate[:, None]
        grads.append(grad)
    return rows, grads


def _qr_terms(
    model: QrMnnModel, coefs: list[np.ndarray], data: SurvivalData, events: list[np.ndarray]
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Per-row contributions and dL/dc for a quantile model.

    With u* solving sum_k c_k I_k(u*) = T: Lambda = u*, lambda = 1/q where
    q = sum_k c_k nu_k(u*). Implicit differentiation gives
    du*/dc = -I(u*)/q and d log(lambda)/dc = -nu(u*)/q + q' I(u*)/q^2.
    """
    rows = np.zeros(len(data))
    grads = []
    for j, (c, basis) in enumerate(zip(coefs, model.bases, strict=True)):
        u = basis.inverse_weighted_integral_batch(c, data.time)
        integral = basis.integrate(u)
        nu = basis.evaluate(u)
        q = np.einsum("nk,nk->n", c, nu)
        rows -= u
        grad = integral / q[:, None]
        hit = events[j]
        if hit.size:
            _guard_zero(1.0 / q[hit], hit)
            q_slope = np.einsum("nk,nk->n", c[hit], basis.slope(u[hit]))
            rows[hit] -= np.log(q[hit])
            grad[hit] += (
                -nu[hit] / q[hit, None]
                + (q_slope / q[hit] ** 2)[:, None] * integral[hit]
            )
        grads.append(grad)
    return rows, grads


def _guard_zero(rate: np.ndarray, rows: np.ndarray) -> None:
    bad = np.flatnonzero(~(rate > 0))
    if bad.size:
        i = int(rows[bad[0]])
        raise EstimationError(
            f"Hazard is zero at the observed event of record {i}", record_index=i
        )


def full_loglik_and_gradient(
    model: MnnModel,
    data: SurvivalData,
    mode: Mode = "eval",
    rng: np.random.Generator | None = None,
) -> tuple[float, GradientBuffer]:
    if len(data) == 0:
        raise EstimationError("Log-likelihood needs at least one record")
    data.check_event_types(model.event_count)
    psi, tape = model.network_outputs(data.covariates, mode=mode, rng=rng)
    coefs = model.split_coefficients(psi)
    events = [
        np.flatnonzero((data.event == 1) & (data.event_type == j + 1))
        for j in range(model.event_count)
    ]
    if isinstance(model, QrMnnModel):
        rows, grads = _qr_terms(model, coefs, data, events)
    elif isinstance(model, DhMnnModel):
        rows, grads = _dh_terms(model, coefs, data, events)
    else:
        raise EstimationError(
            f"Full likelihood applies to qr and dh models, not '{model.kind}'"
        )
    n = float(len(data))
    cotangent = model.output_cotangent([g / n for g in grads], psi)
    return float(rows.sum() / n), backward(tape, cotangent)


def full_loglik(model: MnnModel, data: SurvivalData) -> float:
    value, _ = full_loglik_and_gradient(model, data)
    return value
