"""Uniform agent interface shared by the four learners.

Each period the runner calls ``act`` with the observed price pair, resolves
the market, then calls ``observe`` with the transition.  Shocks are latent:
observations never contain them, the reward passed to ``observe`` is the
structural (zero-shock) profit at the posted prices, and the hypothetical
profit oracle ``profit_fn(own_price, opp_price)`` passed to ``act`` is the
same deterministic demand model — search-based agents can query it without
consuming market periods, but no agent can peek at disturbances firms never
see.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

AGENT_NAMES = ("qlearning", "pso", "ddqn", "ddpg")


@dataclass(frozen=True)
class Observation:
    own_last_price: float
    opp_last_price: float
    t: int


class Agent(abc.ABC):
    @abc.abstractmethod
    def act(self, obs: Observation,
            profit_fn: Optional[Callable[[float, float], float]] = None) -> float:
        """Return the price to post this period."""

    @abc.abstractmethod
    def observe(self, obs: Observation, action: float, reward: float,
                next_obs: Observation) -> None:
        """Consume the period's transition and learn."""


def make_agent(kind: str, grid, rng: np.random.Generator, overrides=None) -> Agent:
    """Construct an agent by config name, applying hyperparameter overrides."""
    from .qlearning import QLearningAgent
    from .pso import PsoAgent
    from .ddqn import DdqnAgent
    from .ddpg import DdpgAgent

    classes = {
        "qlearning": QLearningAgent,
        "pso": PsoAgent,
        "ddqn": DdqnAgent,
        "ddpg": DdpgAgent,
    }
    if kind not in classes:
        raise ValueError(f"unknown agent kind {kind!r}; expected one of {AGENT_NAMES}")
    kwargs = dict(overrides or {})
    return classes[kind](grid=grid, rng=rng, **kwargs)
