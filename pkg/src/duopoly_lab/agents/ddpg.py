"""DDPG pricing agent with continuous prices on [0, 2].

Actor maps the normalized price pair to a tanh-bounded action a in [-1, 1];
the posted price is 1 + a.  The critic batch-normalizes the state path and
concatenates the action after its first hidden layer.  Targets track the
online networks by exponential moving average.

The exploration scale decays so that its 1.0 -> 0.01 schedule spans most of
a standard 10,000-period run.  Exhausting exploration in the first few
hundred periods leaves the joint policy wherever the early ratchet put it
(in practice pinned at the price cap): once both actors saturate, the
critics never again see the price deviations needed to learn that undercutting
pays, and the cap becomes absorbing.
"""

from __future__ import annotations

import copy

import numpy as np

from ..nn import Adam, DdpgCritic, Mlp, OuNoise, ReplayBuffer, soft_update
from .base import Agent, Observation

PRICE_LO, PRICE_HI = 0.0, 2.0


class DdpgAgent(Agent):
    def __init__(self, grid, rng: np.random.Generator, gamma: float = 0.99,
                 actor_lr: float = 1e-4, critic_lr: float = 1e-3,
                 weight_decay: float = 1e-2, buffer_capacity: int = 1_000_000,
                 batch_size: int = 64, tau: float = 0.001,
                 ou_theta: float = 0.15, ou_mu: float = 0.0,
                 ou_sigma: float = 0.2, exploration_decay: float = 0.9993,
                 exploration_min: float = 0.01, hidden=(400, 300)):
        self.rng = rng
        self.gamma = gamma
        self.batch_size = batch_size
        self.tau = tau
        self.exploration_scale = 1.0
        self.exploration_decay = exploration_decay
        self.exploration_min = exploration_min

        self.actor = Mlp([2, *hidden, 1], rng, output="tanh")
        self.critic = DdpgCritic(2, 1, rng, h1=hidden[0], h2=hidden[1])
        self.actor_target = copy.deepcopy(self.actor)
        self.critic_target = copy.deepcopy(self.critic)

        self.actor_optim = Adam(self.actor.params(), lr=actor_lr)
        self.critic_optim = Adam(self.critic.params(), lr=critic_lr,
                                 weight_decay=weight_decay)
        self.buffer = ReplayBuffer(buffer_capacity, state_dim=2)
        self.noise = OuNoise(rng, theta=ou_theta, mu=ou_mu, sigma=ou_sigma)

    # prices live in [0, 2]; the action midpoint 1.0 maps to zero
    def normalize(self, price: float) -> float:
        return price - 1.0

    def denormalize(self, a: float) -> float:
        return a + 1.0

    def _state(self, obs: Observation) -> np.ndarray:
        return np.array([[self.normalize(obs.own_last_price),
                          self.normalize(obs.opp_last_price)]])

    def policy_action(self, obs: Observation) -> float:
        """Noiseless actor output in [-1, 1]."""
        return float(self.actor.forward(self._state(obs), train=False)[0, 0])

    def act(self, obs: Observation, profit_fn=None) -> float:
        a = self.policy_action(obs) + self.exploration_scale * self.noise.step()
        a = float(np.clip(a, -1.0, 1.0))
        return self.denormalize(a)

    def observe(self, obs, action, reward, next_obs):
        s = self._state(obs)[0]
        s_next = self._state(next_obs)[0]
        self.buffer.push(s, self.normalize(action), reward, s_next)
        if len(self.buffer) >= self.batch_size:
            self._learn_step()
        self.exploration_scale = max(self.exploration_min,
                                     self.exploration_scale * self.exploration_decay)

    def _learn_step(self):
        states, actions, rewards, next_states = self.buffer.sample(
            self.batch_size, self.rng)
        actions = actions[:, None]

        # critic: TD target from target actor/critic, squared loss
        a_next = self.actor_target.forward(next_states, train=False)
        q_next = self.critic_target.forward(next_states, a_next, train=False)
        y = rewards[:, None] + self.gamma * q_next
        q = self.critic.forward(states, actions, train=True)
        g_q = 2.0 * (q - y) / self.batch_size
        self.critic.backward(g_q)
        self.critic_optim.step(self.critic.grads())

        # actor: ascend Q(s, actor(s)) through the critic's action input
        a_pi = self.actor.forward(states, train=True)
        self.critic.forward(states, a_pi, train=True)
        _, g_a = self.critic.backward(-np.ones((self.batch_size, 1)) / self.batch_size)
        self.actor.backward(g_a)
        self.actor_optim.step(self.actor.grads())

        soft_update(self.actor_target.state_arrays(), self.actor.state_arrays(),
                    self.tau)
        soft_update(self.critic_target.state_arrays(), self.critic.state_arrays(),
                    self.tau)
