"""Ornstein-Uhlenbeck exploration noise."""

from __future__ import annotations

import numpy as np


def ou_step(xi: float, theta_ou: float, mu_ou: float, sigma_ou: float,
            rng: np.random.Generator) -> float:
    """One discrete OU step: xi + theta*(mu - xi) + sigma*eps."""
    eps = rng.standard_normal() if sigma_ou > 0 else 0.0
    return xi + theta_ou * (mu_ou - xi) + sigma_ou * eps


class OuNoise:
    def __init__(self, rng: np.random.Generator, theta: float = 0.15,
                 mu: float = 0.0, sigma: float = 0.2):
        self.rng = rng
        self.theta = theta
        self.mu = mu
        self.sigma = sigma
        self.xi = mu

    def step(self) -> float:
        self.xi = ou_step(self.xi, self.theta, self.mu, self.sigma, self.rng)
        return self.xi
