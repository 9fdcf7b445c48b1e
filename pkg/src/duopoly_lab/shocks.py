"""Per-firm AR(1) latent demand disturbances and the four named regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

REGIME_NAMES = ("none", "scheme_a", "scheme_b", "scheme_c")


@dataclass(frozen=True)
class ShockRegime:
    name: str
    rho: float
    sigma_eta: float

    def stationary_sd(self) -> float:
        """Standard deviation of the stationary AR(1) distribution."""
        if self.sigma_eta == 0.0:
            return 0.0
        return self.sigma_eta / math.sqrt(1.0 - self.rho ** 2)


_REGIMES = {
    "none": ShockRegime("none", 0.0, 0.0),
    "scheme_a": ShockRegime("scheme_a", 0.3, 0.5),
    "scheme_b": ShockRegime("scheme_b", 0.95, 0.05),
    "scheme_c": ShockRegime("scheme_c", 0.9, 0.3),
}


def regime_params(name: str) -> ShockRegime:
    """Look up the (rho, sigma_eta) pair for a named regime."""
    try:
        return _REGIMES[name]
    except KeyError:
        raise ConfigError(
            f"unknown shock regime {name!r}; expected one of {REGIME_NAMES}"
        ) from None


class ShockState:
    """Latent shock pair (z1, z2) with one independent stream per firm.

    Owned by exactly one run; ``advance`` mutates in place and returns self.
    """

    def __init__(self, regime: ShockRegime, streams):
        if len(streams) != 2:
            raise ValueError("ShockState needs exactly two firm streams")
        self.regime = regime
        self.streams = streams
        self.z = np.zeros(2)

    @classmethod
    def from_seed_sequences(cls, regime: ShockRegime, seed_seqs) -> "ShockState":
        return cls(regime, [np.random.default_rng(s) for s in seed_seqs])

    def advance(self) -> "ShockState":
        """One AR(1) step z' = rho z + eta for each firm independently."""
        r = self.regime
        for i in (0, 1):
            eta = self.streams[i].normal(0.0, r.sigma_eta) if r.sigma_eta > 0 else 0.0
            self.z[i] = r.rho * self.z[i] + eta
        return self


def ar1_step(state: ShockState) -> ShockState:
    """Functional alias for :meth:`ShockState.advance`."""
    return state.advance()
