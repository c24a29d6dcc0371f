from __future__ import annotations

import numpy as np

from ..nn import GradientBuffer, NetworkParams


class Adam:
    """Adaptive-moment descent with global-norm gradient clipping.

    `step` minimizes: pass the gradient of the loss, not of the objective.
    """

    def __init__(
        self,
        learning_rate: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
        clip_norm: float | None = 10.0,
    ):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.clip_norm = clip_norm
        self.iteration = 0
        self._m: list[np.ndarray] | None = None
        self._v: list[np.ndarray] | None = None

    def step(self, params: NetworkParams, grads: GradientBuffer) -> NetworkParams:
        scale = 1.0
        if self.clip_norm is not None:
            norm = grads.global_norm()
            if norm > self.clip_norm:
                scale = self.clip_norm / norm
        g_arrays = [g * scale for g in grads.arrays()]
        if self._m is None or self._v is None:
            self._m = [np.zeros_like(g) for g in g_arrays]
            self._v = [np.zeros_like(g) for g in g_arrays]

        self.iteration += 1
        t = self.iteration
        correction1 = 1.0 - self.beta1**t
        correction2 = 1.0 - self.beta2**t
        updated = []
        for p, g, m, v in zip(params.arrays(), g_arrays, self._m, self._v, strict=True):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            m_hat = m / correction1
            v_hat = v / correction2
            updated.append(p - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon))
        return params.with_arrays(updated)
