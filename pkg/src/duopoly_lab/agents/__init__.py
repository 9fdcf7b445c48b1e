from .base import AGENT_NAMES, Agent, Observation, make_agent
from .qlearning import QLearningAgent, epsilon_at, q_update
from .pso import PsoAgent, Swarm, inertia_weight, pso_iterate, pso_maybe_restart
from .ddqn import DdqnAgent, ddqn_target
from .ddpg import DdpgAgent

__all__ = [
    "AGENT_NAMES", "Agent", "DdpgAgent", "DdqnAgent", "Observation",
    "PsoAgent", "QLearningAgent", "Swarm", "ddqn_target", "epsilon_at",
    "inertia_weight", "make_agent", "pso_iterate", "pso_maybe_restart",
    "q_update",
]
