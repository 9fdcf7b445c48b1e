"""Collusion and welfare measures from terminal-window run statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DegenerateBenchmarkError
from .markets import MarketParams, Model, logit_utilities
from .shocks import ShockRegime


@dataclass(frozen=True)
class WindowStats:
    """Arithmetic means over exactly the final ``window`` periods of a run."""

    mean_price: Tuple[float, float]
    mean_profit: Tuple[float, float]
    window: int
    run_id: str = ""
    seed: int = 0

    @classmethod
    def from_series(cls, prices: np.ndarray, profits: np.ndarray,
                    window: int, run_id: str = "", seed: int = 0) -> "WindowStats":
        """Compute terminal-window means from per-period (T, 2) arrays."""
        prices = np.asarray(prices, dtype=float)
        profits = np.asarray(profits, dtype=float)
        if window > len(prices):
            raise ValueError(f"window {window} exceeds series length {len(prices)}")
        tail_p = prices[-window:]
        tail_pi = profits[-window:]
        return cls(
            mean_price=(float(tail_p[:, 0].mean()), float(tail_p[:, 1].mean())),
            mean_profit=(float(tail_pi[:, 0].mean()), float(tail_pi[:, 1].mean())),
            window=window, run_id=run_id, seed=seed,
        )


def delta_index(pi_bar: float, pi_n: float, pi_m: float) -> float:
    """Profit collusion index: 0 at Nash profits, 1 at monopoly profits."""
    if pi_m == pi_n:
        raise DegenerateBenchmarkError("pi_mono equals pi_nash")
    return (pi_bar - pi_n) / (pi_m - pi_n)


def rpdi(p_bar: float, p_n: float, p_m: float) -> float:
    """Relative price deviation index: 0 at Nash pricing, 1 at monopoly pricing."""
    if p_m == p_n:
        raise DegenerateBenchmarkError("p_mono equals p_nash")
    return (p_bar - p_n) / (p_m - p_n)


def efficiency_ratio(delta: float, price_index: float) -> float:
    """Delta per unit of RPDI; NaN when the price index is zero (undefined)."""
    if price_index == 0.0:
        return math.nan
    return delta / price_index


def delta_change(delta_shock: float, delta_baseline: float) -> float:
    """Shift of the profit index relative to the no-shock baseline."""
    return delta_shock - delta_baseline


def logit_consumer_surplus(prices: Tuple[float, float], params: MarketParams,
                           regime: ShockRegime, samples: int = 10000,
                           seed: int = 0) -> float:
    """Expected per-consumer surplus (Logit inclusive value) at fixed prices.

    The log-sum of exponentiated utilities is divided by the price
    sensitivity 1/mu, i.e. multiplied by mu; the expectation runs over the
    stationary shock distribution.
    """
    if params.model is not Model.LOGIT:
        raise ValueError("consumer surplus is defined for the Logit model only")
    sd = regime.stationary_sd()
    if sd == 0.0:
        z1 = np.zeros(1)
        z2 = np.zeros(1)
    else:
        rng = np.random.default_rng(seed)
        z1 = rng.normal(0.0, sd, samples)
        z2 = rng.normal(0.0, sd, samples)
    u1, u2, u0 = logit_utilities(prices[0], prices[1], z1, z2, params)
    u0 = np.broadcast_to(np.asarray(u0, dtype=float), u1.shape)
    m = np.maximum(np.maximum(u1, u2), u0)
    lse = m + np.log(np.exp(u1 - m) + np.exp(u2 - m) + np.exp(u0 - m))
    return float(params.mu * lse.mean())


def consumer_surplus_change_pct(prices: Tuple[float, float], p_nash: float,
                                params: MarketParams, regime: ShockRegime,
                                samples: int = 10000, seed: int = 0) -> float:
    """Percent change of consumer surplus at ``prices`` relative to Nash pricing."""
    cs = logit_consumer_surplus(prices, params, regime, samples, seed)
    cs_n = logit_consumer_surplus((p_nash, p_nash), params, regime, samples, seed)
    if cs_n == 0.0:
        return math.nan
    return 100.0 * (cs - cs_n) / abs(cs_n)
