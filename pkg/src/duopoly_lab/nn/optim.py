"""Optimizer, loss, and target-network utilities for the deep agents."""

from __future__ import annotations

import numpy as np


class Adam:
    """Adaptive-moment optimizer with optional decoupled quadratic weight penalty.

    Updates parameter arrays in place.  The weight penalty is applied outside
    the moment rescaling (AdamW-style shrink by lr * coef * param).
    """

    def __init__(self, params, lr: float = 1e-4, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8,
                 weight_decay: float = 0.0):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.weight_decay = weight_decay
        self.t = 0
        self.m = [np.zeros_like(p) for p in self.params]
        self.v = [np.zeros_like(p) for p in self.params]

    def step(self, grads):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for i, (p, g) in enumerate(zip(self.params, grads)):
            self.m[i] = b1 * self.m[i] + (1 - b1) * g
            self.v[i] = b2 * self.v[i] + (1 - b2) * g * g
            m_hat = self.m[i] / (1 - b1 ** self.t)
            v_hat = self.v[i] / (1 - b2 ** self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
            if self.weight_decay:
                p -= self.lr * self.weight_decay * p


def huber(residual, threshold: float = 1.0):
    """Huber loss and its derivative with respect to the residual."""
    if threshold <= 0:
        raise ValueError("huber threshold must be positive")
    r = np.asarray(residual, dtype=float)
    quad = np.abs(r) <= threshold
    loss = np.where(quad, 0.5 * r * r, threshold * (np.abs(r) - 0.5 * threshold))
    dloss = np.clip(r, -threshold, threshold)
    if np.isscalar(residual):
        return float(loss), float(dloss)
    return loss, dloss


def clip_global_norm(grads, max_norm: float = 1.0):
    """Scale all gradients jointly so their global L2 norm is at most max_norm."""
    if max_norm <= 0:
        raise ValueError("max_norm must be positive")
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads))
    if total > max_norm:
        scale = max_norm / total
        grads = [g * scale for g in grads]
    return grads


def soft_update(target_arrays, online_arrays, tau: float):
    """In-place exponential moving average: target <- tau*online + (1-tau)*target."""
    for t, o in zip(target_arrays, online_arrays):
        t *= 1.0 - tau
        t += tau * o


def hard_copy(target_arrays, online_arrays):
    """In-place exact copy of online arrays into target arrays."""
    for t, o in zip(target_arrays, online_arrays):
        t[...] = o
