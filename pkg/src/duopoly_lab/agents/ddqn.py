"""Double DQN pricing agent over the 15-point grid.

Online network selects the greedy next action, target network evaluates it.
States are the normalized (own, opponent) last-price pair; the repeated game
is infinite-horizon, so targets never mask the discount.
"""

from __future__ import annotations

import copy

import numpy as np

from ..markets import GRID_SIZE, PriceGrid
from ..nn import Adam, Mlp, ReplayBuffer, clip_global_norm, huber
from ..nn.optim import hard_copy
from .base import Agent, Observation


def ddqn_target(r, s_next: np.ndarray, online: Mlp, target: Mlp,
                gamma: float) -> np.ndarray:
    """Decoupled target y = r + gamma * Q_target(s', argmax_a Q_online(s', a))."""
    q_online = online.forward(s_next, train=False)
    q_target = target.forward(s_next, train=False)
    a_star = np.argmax(q_online, axis=1)
    return np.asarray(r) + gamma * q_target[np.arange(len(q_target)), a_star]


class DdqnAgent(Agent):
    def __init__(self, grid: PriceGrid, rng: np.random.Generator,
                 gamma: float = 0.99, lr: float = 1e-4,
                 buffer_capacity: int = 50_000, batch_size: int = 128,
                 target_period: int = 500, epsilon_min: float = 0.01,
                 epsilon_decay: float = 0.995, grad_clip: float = 1.0,
                 hidden=(128, 128, 64)):
        self.grid = grid
        self.rng = rng
        self.gamma = gamma
        self.batch_size = batch_size
        self.target_period = target_period
        self.epsilon = 1.0
        self.epsilon_min = epsilon_min
        self.epsilon_decay = epsilon_decay
        self.grad_clip = grad_clip

        sizes = [2, *hidden, GRID_SIZE]
        self.online = Mlp(sizes, rng)
        self.target = copy.deepcopy(self.online)
        self.buffer = ReplayBuffer(buffer_capacity, state_dim=2)
        self.optim = Adam(self.online.params(), lr=lr)
        self.grad_steps = 0

        # price normalization to [-1, 1] over the grid span
        self._mid = (grid.hi + grid.lo) / 2.0
        self._half = (grid.hi - grid.lo) / 2.0 or 1.0

    def normalize(self, price: float) -> float:
        return (price - self._mid) / self._half

    def denormalize(self, x: float) -> float:
        return x * self._half + self._mid

    def _state(self, obs: Observation) -> np.ndarray:
        return np.array([[self.normalize(obs.own_last_price),
                          self.normalize(obs.opp_last_price)]])

    def greedy_action(self, obs: Observation) -> int:
        q = self.online.forward(self._state(obs), train=False)
        return int(np.argmax(q[0]))

    def act(self, obs: Observation, profit_fn=None) -> float:
        if self.rng.random() < self.epsilon:
            a = int(self.rng.integers(GRID_SIZE))
        else:
            a = self.greedy_action(obs)
        return float(self.grid.points[a])

    def observe(self, obs, action, reward, next_obs):
        s = self._state(obs)[0]
        s_next = self._state(next_obs)[0]
        a = self.grid.nearest_index(action)
        self.buffer.push(s, a, reward, s_next)
        if len(self.buffer) >= self.batch_size:
            self._learn_step()
        # exploration decays once per environment period
        self.epsilon = max(self.epsilon_min, self.epsilon * self.epsilon_decay)

    def _learn_step(self):
        states, actions, rewards, next_states = self.buffer.sample(
            self.batch_size, self.rng)
        actions = actions.astype(int)
        y = ddqn_target(rewards, next_states, self.online, self.target, self.gamma)

        q = self.online.forward(states, train=True)
        taken = q[np.arange(self.batch_size), actions]
        _, dres = huber(y - taken)
        # d loss / d Q(s,a) = -huber'(y - Q); mean over the batch
        g_out = np.zeros_like(q)
        g_out[np.arange(self.batch_size), actions] = -dres / self.batch_size
        self.online.backward(g_out)

        grads = clip_global_norm(self.online.grads(), self.grad_clip)
        self.optim.step(grads)
        self.grad_steps += 1
        if self.grad_steps % self.target_period == 0:
            hard_copy(self.target.state_arrays(), self.online.state_arrays())
