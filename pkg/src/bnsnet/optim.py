"""AdamW with decoupled weight decay.

The update is theta <- theta - lr * (m_hat / (sqrt(v_hat) + eps) + wd * theta),
so the decay term never passes through the moment estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .autodiff import ShapeError, Tensor


@dataclass
class AdamWState:
    """Per-parameter first/second moments plus the shared step counter."""

    learning_rate: float = 1e-4
    weight_decay: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)


def adamw_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray],
               state: AdamWState) -> None:
    """One in-place AdamW update over named parameter arrays."""
    state.step += 1
    t = state.step
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t
    for name, theta in params.items():
        g = grads[name]
        if g.shape != theta.shape:
            raise ShapeError(f"grad shape {g.shape} does not match param shape "
                             f"{theta.shape} for '{name}'")
        if name not in state.m:
            state.m[name] = np.zeros_like(theta)
            state.v[name] = np.zeros_like(theta)
        m = state.m[name]
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        m_hat = m / bc1
        v_hat = v / bc2
        theta -= state.learning_rate * (m_hat / (np.sqrt(v_hat) + state.eps)
                                        + state.weight_decay * theta)


class AdamW:
    """Tensor-facing wrapper around :func:`adamw_step`."""

    def __init__(self, params: dict[str, Tensor], learning_rate: float = 1e-4,
                 weight_decay: float = 0.0, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.state = AdamWState(learning_rate=learning_rate, weight_decay=weight_decay,
                                beta1=beta1, beta2=beta2, eps=eps)

    def zero_grad(self) -> None:
        for t in self.params.values():
            t.grad = None

    def step(self, grad_scale: float = 1.0) -> None:
        arrays = {name: t.data for name, t in self.params.items()}
        grads = {}
        for name, t in self.params.items():
            g = t.grad if t.grad is not None else np.zeros_like(t.data)
            grads[name] = g * grad_scale if grad_scale != 1.0 else g
        adamw_step(arrays, grads, self.state)
