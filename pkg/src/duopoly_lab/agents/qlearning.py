"""Tabular Q-learning over the 15-point price grid.

State is the ordered pair (own last grid index, opponent last grid index),
flattened to 225 rows; actions are the 15 own grid indices.
"""

from __future__ import annotations

import math

import numpy as np

from ..markets import GRID_SIZE, PriceGrid
from .base import Agent, Observation


def epsilon_at(t: int, beta: float) -> float:
    """Exponentially decaying exploration rate exp(-beta * t)."""
    return math.exp(-beta * t)


def q_update(table: np.ndarray, s: int, a: int, r: float, s_next: int,
             alpha: float, delta: float) -> np.ndarray:
    """In-place TD(0) update of Q(s, a); returns the table."""
    n_states, n_actions = table.shape
    if not (0 <= s < n_states and 0 <= a < n_actions and 0 <= s_next < n_states):
        raise IndexError(f"state/action out of range: s={s}, a={a}, s_next={s_next}")
    table[s, a] += alpha * (r + delta * table[s_next].max() - table[s, a])
    return table


class QLearningAgent(Agent):
    def __init__(self, grid: PriceGrid, rng: np.random.Generator,
                 alpha: float = 0.15, delta: float = 0.95,
                 beta: float = 1.5e-4):
        self.grid = grid
        self.rng = rng
        self.alpha = alpha
        self.delta = delta
        self.beta = beta
        self.table = np.zeros((GRID_SIZE * GRID_SIZE, GRID_SIZE))

    def state_index(self, own_price: float, opp_price: float) -> int:
        own = self.grid.nearest_index(own_price)
        opp = self.grid.nearest_index(opp_price)
        return own * GRID_SIZE + opp

    def act(self, obs: Observation, profit_fn=None) -> float:
        eps = epsilon_at(obs.t, self.beta)
        if self.rng.random() < eps:
            a = int(self.rng.integers(GRID_SIZE))
        else:
            a = int(np.argmax(self.table[self.state_index(obs.own_last_price,
                                                          obs.opp_last_price)]))
        return float(self.grid.points[a])

    def observe(self, obs, action, reward, next_obs):
        s = self.state_index(obs.own_last_price, obs.opp_last_price)
        a = self.grid.nearest_index(action)
        s_next = self.state_index(next_obs.own_last_price, next_obs.opp_last_price)
        q_update(self.table, s, a, reward, s_next, self.alpha, self.delta)
