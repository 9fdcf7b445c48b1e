"""Fixed-capacity FIFO replay buffer over (s, a, r, s') transitions."""

from __future__ import annotations

import numpy as np


class ReplayBuffer:
    """Ring buffer with uniform with-replacement sampling.

    Actions are stored as a float column; discrete agents store the action
    index and cast on the way out.
    """

    def __init__(self, capacity: int, state_dim: int):
        self.capacity = capacity
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros(capacity)
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.cursor = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def push(self, s, a, r, s_next):
        i = self.cursor
        self.states[i] = s
        self.actions[i] = a
        self.rewards[i] = r
        self.next_states[i] = s_next
        self.cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator):
        """Uniform sample with replacement; raises if empty.

        Callers gate learning on ``len(buffer) >= batch``; sampling a batch
        from fewer stored transitions is well-defined (duplicates) and used
        only in degenerate setups.
        """
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        idx = rng.integers(0, self.size, size=batch_size)
        return (self.states[idx], self.actions[idx], self.rewards[idx],
                self.next_states[idx])
