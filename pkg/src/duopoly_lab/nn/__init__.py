from .net import BatchNorm, Dense, DdpgCritic, Mlp, ReLU, Tanh
from .optim import Adam, clip_global_norm, huber, soft_update
from .noise import OuNoise, ou_step
from .replay import ReplayBuffer

__all__ = [
    "Adam", "BatchNorm", "Dense", "DdpgCritic", "Mlp", "OuNoise",
    "ReLU", "ReplayBuffer", "Tanh", "clip_global_norm", "huber",
    "ou_step", "soft_update",
]
