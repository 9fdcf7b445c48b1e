"""Particle-swarm pricing: memoryless search over [0, 2].

Each period the swarm is evaluated via a hypothetical profit oracle (no
extra market periods are consumed) and the firm plays the current global
best.  Because the global best is an incumbent that is only ever displaced
by a strictly better evaluation, the swarm in effect best-responds to the
reference opponent price it first observed; evaluating against the drifting
posted price would merely ratchet the incumbent onto transient opponent
maxima.  A restart kicks in after 300 iterations without global-best
improvement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import Agent, Observation

N_PARTICLES = 10
POS_LO, POS_HI = 0.0, 2.0
VEL_CLIP = 0.3
C1 = C2 = 1.75
RESTART_PATIENCE = 300


def inertia_weight(t: int) -> float:
    """Linearly decaying inertia, floored at 0.4."""
    return max(0.4, 0.9 - 0.5 * t / 10_000.0)


@dataclass
class Swarm:
    positions: np.ndarray
    velocities: np.ndarray
    pbest_pos: np.ndarray
    pbest_val: np.ndarray
    gbest_pos: float
    gbest_val: float = -np.inf
    stagnation: int = field(default=0)

    @classmethod
    def init(cls, rng: np.random.Generator) -> "Swarm":
        pos = rng.uniform(POS_LO, POS_HI, N_PARTICLES)
        return cls(
            positions=pos,
            velocities=np.zeros(N_PARTICLES),
            pbest_pos=pos.copy(),
            pbest_val=np.full(N_PARTICLES, -np.inf),
            gbest_pos=float(pos[0]),
        )


def pso_iterate(swarm: Swarm, t: int, opp_price: float, profit_fn,
                rng: np.random.Generator, c1: float = C1, c2: float = C2) -> Swarm:
    """Evaluate all particles against the opponent's posted price, refresh
    bests, then move the swarm one step."""
    values = np.array([profit_fn(x, opp_price) for x in swarm.positions])

    improved_p = values > swarm.pbest_val
    swarm.pbest_val[improved_p] = values[improved_p]
    swarm.pbest_pos[improved_p] = swarm.positions[improved_p]

    best = int(np.argmax(values))
    if values[best] > swarm.gbest_val:
        swarm.gbest_val = float(values[best])
        swarm.gbest_pos = float(swarm.positions[best])
        swarm.stagnation = 0
    else:
        swarm.stagnation += 1

    w = inertia_weight(t)
    r1 = rng.uniform(0.0, 1.0, N_PARTICLES)
    r2 = rng.uniform(0.0, 1.0, N_PARTICLES)
    vel = (w * swarm.velocities
           + c1 * r1 * (swarm.pbest_pos - swarm.positions)
           + c2 * r2 * (swarm.gbest_pos - swarm.positions))
    swarm.velocities = np.clip(vel, -VEL_CLIP, VEL_CLIP)
    swarm.positions = np.clip(swarm.positions + swarm.velocities, POS_LO, POS_HI)
    return swarm


def pso_maybe_restart(swarm: Swarm, rng: np.random.Generator,
                      patience: int = RESTART_PATIENCE,
                      keep_elite: bool = True) -> Swarm:
    """Reinitialize the swarm after ``patience`` stagnant iterations.

    The incumbent global-best position is kept as one particle of the fresh
    swarm (switchable off); its stored value is reset so the next improvement
    is measured from scratch.
    """
    if swarm.stagnation < patience:
        return swarm
    pos = rng.uniform(POS_LO, POS_HI, N_PARTICLES)
    if keep_elite:
        pos[0] = swarm.gbest_pos
    swarm.positions = pos
    swarm.velocities = np.zeros(N_PARTICLES)
    swarm.pbest_pos = pos.copy()
    swarm.pbest_val = np.full(N_PARTICLES, -np.inf)
    swarm.gbest_val = -np.inf
    swarm.stagnation = 0
    return swarm


class PsoAgent(Agent):
    def __init__(self, grid, rng: np.random.Generator, c1: float = C1,
                 c2: float = C2, restart_patience: int = RESTART_PATIENCE,
                 keep_elite: bool = True):
        self.rng = rng
        self.c1 = c1
        self.c2 = c2
        self.restart_patience = restart_patience
        self.keep_elite = keep_elite
        self.swarm = Swarm.init(rng)
        self.ref_price: float | None = None

    def act(self, obs: Observation, profit_fn=None) -> float:
        if profit_fn is None:
            raise ValueError("PsoAgent.act requires a profit oracle")
        if self.ref_price is None:
            self.ref_price = obs.opp_last_price
        pso_iterate(self.swarm, obs.t, self.ref_price, profit_fn,
                    self.rng, self.c1, self.c2)
        pso_maybe_restart(self.swarm, self.rng, self.restart_patience,
                          self.keep_elite)
        return self.swarm.gbest_pos

    def observe(self, obs, action, reward, next_obs):
        pass  # memoryless across market periods; all search happens in act()
