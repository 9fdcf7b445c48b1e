"""Minimal dense network toolkit: layers, MLP stacks, and the two-input critic.

Everything is double precision numpy.  Layers keep the cache of their last
forward pass, so forward/backward pairs must not interleave across calls on
the same instance.  ``backward`` returns the gradient with respect to the
layer input; parameter gradients are stored on the layer (``gW``, ``gb``,
...) and collected via ``grads()``.
"""

from __future__ import annotations

import numpy as np


def uniform_fan_in_init(rng: np.random.Generator, fan_in: int, shape) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class Dense:
    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator):
        self.W = uniform_fan_in_init(rng, n_in, (n_in, n_out))
        self.b = uniform_fan_in_init(rng, n_in, (n_out,))
        self.gW = np.zeros_like(self.W)
        self.gb = np.zeros_like(self.b)
        self._x = None

    def forward(self, x: np.ndarray, train: bool) -> np.ndarray:
        self._x = x
        return x @ self.W + self.b

    def backward(self, g: np.ndarray) -> np.ndarray:
        self.gW = self._x.T @ g
        self.gb = g.sum(axis=0)
        return g @ self.W.T

    def params(self):
        return [self.W, self.b]

    def grads(self):
        return [self.gW, self.gb]

    def state_arrays(self):
        return [self.W, self.b]


class ReLU:
    def __init__(self):
        self._mask = None

    def forward(self, x: np.ndarray, train: bool) -> np.ndarray:
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, g: np.ndarray) -> np.ndarray:
        return np.where(self._mask, g, 0.0)

    def params(self):
        return []

    def grads(self):
        return []

    def state_arrays(self):
        return []


class Tanh:
    def __init__(self):
        self._y = None

    def forward(self, x: np.ndarray, train: bool) -> np.ndarray:
        self._y = np.tanh(x)
        return self._y

    def backward(self, g: np.ndarray) -> np.ndarray:
        return g * (1.0 - self._y ** 2)

    def params(self):
        return []

    def grads(self):
        return []

    def state_arrays(self):
        return []


class BatchNorm:
    """Batch normalization with running statistics for eval mode."""

    def __init__(self, n_features: int, momentum: float = 0.99, eps: float = 1e-5):
        self.gamma = np.ones(n_features)
        self.beta = np.zeros(n_features)
        self.running_mean = np.zeros(n_features)
        self.running_var = np.ones(n_features)
        self.momentum = momentum
        self.eps = eps
        self.g_gamma = np.zeros(n_features)
        self.g_beta = np.zeros(n_features)
        self._cache = None

    def forward(self, x: np.ndarray, train: bool) -> np.ndarray:
        if train:
            mean = x.mean(axis=0)
            var = x.var(axis=0)
            self.running_mean = self.momentum * self.running_mean + (1 - self.momentum) * mean
            self.running_var = self.momentum * self.running_var + (1 - self.momentum) * var
        else:
            mean = self.running_mean
            var = self.running_var
        inv_std = 1.0 / np.sqrt(var + self.eps)
        x_hat = (x - mean) * inv_std
        self._cache = (x_hat, inv_std, train, x.shape[0])
        return self.gamma * x_hat + self.beta

    def backward(self, g: np.ndarray) -> np.ndarray:
        x_hat, inv_std, train, n = self._cache
        self.g_gamma = (g * x_hat).sum(axis=0)
        self.g_beta = g.sum(axis=0)
        gx_hat = g * self.gamma
        if not train:
            return gx_hat * inv_std
        # full train-mode gradient through batch mean and variance
        return (inv_std / n) * (
            n * gx_hat
            - gx_hat.sum(axis=0)
            - x_hat * (gx_hat * x_hat).sum(axis=0)
        )

    def params(self):
        return [self.gamma, self.beta]

    def grads(self):
        return [self.g_gamma, self.g_beta]

    def state_arrays(self):
        return [self.gamma, self.beta, self.running_mean, self.running_var]


class Mlp:
    """Plain sequential stack of dense layers with ReLU hidden activations."""

    def __init__(self, layer_sizes, rng: np.random.Generator,
                 output: str = "identity", batchnorm_input: bool = False):
        self.layer_sizes = list(layer_sizes)
        self.layers = []
        if batchnorm_input:
            self.layers.append(BatchNorm(self.layer_sizes[0]))
        for i in range(len(self.layer_sizes) - 1):
            self.layers.append(Dense(self.layer_sizes[i], self.layer_sizes[i + 1], rng))
            if i < len(self.layer_sizes) - 2:
                self.layers.append(ReLU())
        if output == "tanh":
            self.layers.append(Tanh())
        elif output != "identity":
            raise ValueError(f"unknown output activation {output!r}")

    def forward(self, x: np.ndarray, train: bool = False) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x, train)
        return x

    def backward(self, g: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            g = layer.backward(g)
        return g

    def params(self):
        return [p for layer in self.layers for p in layer.params()]

    def grads(self):
        return [g for layer in self.layers for g in layer.grads()]

    def state_arrays(self):
        return [a for layer in self.layers for a in layer.state_arrays()]


class DdpgCritic:
    """Q(s, a) network: batchnormed state -> 400 ReLU -> concat(a) -> 300 ReLU -> 1."""

    def __init__(self, state_dim: int, action_dim: int, rng: np.random.Generator,
                 h1: int = 400, h2: int = 300):
        self.bn = BatchNorm(state_dim)
        self.l1 = Dense(state_dim, h1, rng)
        self.r1 = ReLU()
        self.l2 = Dense(h1 + action_dim, h2, rng)
        self.r2 = ReLU()
        self.l3 = Dense(h2, 1, rng)
        self.action_dim = action_dim
        self._layers = [self.bn, self.l1, self.r1, self.l2, self.r2, self.l3]

    def forward(self, s: np.ndarray, a: np.ndarray, train: bool = False) -> np.ndarray:
        h = self.r1.forward(self.l1.forward(self.bn.forward(s, train), train), train)
        h2 = self.r2.forward(self.l2.forward(np.concatenate([h, a], axis=1), train), train)
        return self.l3.forward(h2, train)

    def backward(self, g: np.ndarray):
        """Returns (grad wrt state, grad wrt action)."""
        g = self.r2.backward(self.l3.backward(g))
        g_cat = self.l2.backward(g)
        g_h, g_a = g_cat[:, :-self.action_dim], g_cat[:, -self.action_dim:]
        g_s = self.bn.backward(self.l1.backward(self.r1.backward(g_h)))
        return g_s, g_a

    def params(self):
        return [p for layer in self._layers for p in layer.params()]

    def grads(self):
        return [g for layer in self._layers for g in layer.grads()]

    def state_arrays(self):
        return [a for layer in self._layers for a in layer.state_arrays()]
