"""Demand systems, price grid, and the per-period market step.

Three symmetric duopoly models are supported: discrete-choice Logit with an
outside option, Hotelling with linear transport cost, and linear
differentiated-products demand.  All demand functions broadcast over numpy
arrays so the benchmark solver can evaluate whole price lattices at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidBenchmarkError, ModelMismatchError

GRID_SIZE = 15
GRID_EXTENSION = 0.15


class Model(str, enum.Enum):
    LOGIT = "logit"
    HOTELLING = "hotelling"
    LINEAR = "linear"


@dataclass(frozen=True)
class MarketParams:
    """Calibration of one demand model.

    Only the fields relevant to ``model`` are read; the rest are ignored.
    ``a`` doubles as the Logit utility intercept and the Linear demand
    intercept.
    """

    model: Model
    a: float = 0.0        # Logit intercept / Linear intercept
    a0: float = 0.0       # outside-option utility (Logit)
    mu: float = 1.0       # Logit scale, > 0
    v: float = 0.0        # Hotelling valuation
    theta: float = 1.0    # Hotelling transport cost, > 0
    d: float = 0.0        # Linear substitution, in [0, 1)
    c: float = 0.0        # marginal cost
    p_nash: float = 0.0
    p_mono: float = 0.0


LOGIT_PRESET = MarketParams(
    model=Model.LOGIT, a=2.0, a0=0.0, mu=0.25, c=1.0,
    p_nash=1.473, p_mono=1.925,
)
HOTELLING_PRESET = MarketParams(
    model=Model.HOTELLING, v=1.75, theta=1.0, c=0.0,
    p_nash=1.00, p_mono=1.25,
)
LINEAR_PRESET = MarketParams(
    model=Model.LINEAR, a=1.0, d=0.25, c=0.0,
    p_nash=1.0 * (1 - 0.25) / (2 - 0.25), p_mono=0.5,
)

_PRESETS = {
    Model.LOGIT: LOGIT_PRESET,
    Model.HOTELLING: HOTELLING_PRESET,
    Model.LINEAR: LINEAR_PRESET,
}


def market_preset(model: Model | str) -> MarketParams:
    """Return the named baseline calibration."""
    return _PRESETS[Model(model)]


@dataclass(frozen=True)
class PriceGrid:
    """The 15-point discrete action set built around Nash/monopoly prices."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=float))

    @property
    def lo(self) -> float:
        return float(self.points[0])

    @property
    def hi(self) -> float:
        return float(self.points[-1])

    def nearest_index(self, price: float) -> int:
        """Index of the grid point closest to ``price``; ties go to the lower index."""
        return int(np.argmin(np.abs(self.points - price)))


def build_price_grid(p_nash: float, p_mono: float,
                     literal_upper: bool = False) -> PriceGrid:
    """Build the 15-point grid spanning a 15% extension of [p_nash, p_mono].

    ``literal_upper`` switches the upper endpoint to the alternative
    ``p_mono + 0.15 + (p_mono - p_nash)`` reading; the default mirrors the
    lower endpoint symmetrically.
    """
    if p_mono < p_nash:
        raise InvalidBenchmarkError(
            f"monopoly price {p_mono} below Nash price {p_nash}")
    span = p_mono - p_nash
    lo = p_nash - GRID_EXTENSION * span
    if literal_upper:
        hi = p_mono + GRID_EXTENSION + span
    else:
        hi = p_mono + GRID_EXTENSION * span
    return PriceGrid(np.linspace(lo, hi, GRID_SIZE))


def logit_utilities(p1, p2, z1, z2, params: MarketParams):
    """Scaled deterministic-plus-shock utilities (u1, u2, u0).

    Utilities are measured in units of the Logit scale, so the price
    sensitivity is 1/mu and the preset reproduces its hard-coded Nash and
    monopoly prices.
    """
    u1 = (params.a - np.asarray(p1, dtype=float) + z1) / params.mu
    u2 = (params.a - np.asarray(p2, dtype=float) + z2) / params.mu
    u0 = params.a0 / params.mu
    return u1, u2, u0


def logit_shares(p1, p2, z1, z2, params: MarketParams):
    """Multinomial Logit market shares (s1, s2, s0).

    Computed via log-sum-exp so large shocks cannot overflow.
    """
    if params.model is not Model.LOGIT:
        raise ModelMismatchError(f"logit_shares called with {params.model}")
    u1, u2, u0 = logit_utilities(p1, p2, z1, z2, params)
    u0 = np.broadcast_to(np.asarray(u0, dtype=float), np.broadcast(u1, u2).shape)
    m = np.maximum(np.maximum(u1, u2), u0)
    e1 = np.exp(u1 - m)
    e2 = np.exp(u2 - m)
    e0 = np.exp(u0 - m)
    denom = e1 + e2 + e0
    return e1 / denom, e2 / denom, e0 / denom


def hotelling_demands(p1, p2, z1, z2, params: MarketParams):
    """Hotelling demand split at the indifferent consumer, clamped to [0, 1].

    Full coverage is assumed (every consumer buys); shocks shift the two
    effective valuations and hence the split point.
    """
    if params.model is not Model.HOTELLING:
        raise ModelMismatchError(f"hotelling_demands called with {params.model}")
    th = params.theta
    x_hat = ((np.asarray(p2, dtype=float) - p1) + (np.asarray(z1, dtype=float) - z2) + th) / (2 * th)
    x_hat = np.clip(x_hat, 0.0, 1.0)
    return x_hat, 1.0 - x_hat


def hotelling_demands_covered(p1, p2, z1, z2, params: MarketParams):
    """Hotelling demands with the participation constraint enforced.

    Consumers whose net utility would be negative stay out, so each firm's
    reach is capped at (v + z_i - p_i)/theta.  The environment step assumes
    full coverage; this variant exists for benchmark optimization, where the
    monopoly search must respect the coverage boundary.
    """
    if params.model is not Model.HOTELLING:
        raise ModelMismatchError(f"hotelling_demands_covered called with {params.model}")
    th = params.theta
    q1, q2 = hotelling_demands(p1, p2, z1, z2, params)
    reach1 = np.clip((params.v + np.asarray(z1, dtype=float) - p1) / th, 0.0, 1.0)
    reach2 = np.clip((params.v + np.asarray(z2, dtype=float) - p2) / th, 0.0, 1.0)
    return np.minimum(q1, reach1), np.minimum(q2, reach2)


def linear_demands(p1, p2, z1, z2, params: MarketParams):
    """Linear differentiated-products demands, floored at zero.

    Firm i's demand row uses its own intercept shock: a_i = a + z_i.
    """
    if params.model is not Model.LINEAR:
        raise ModelMismatchError(f"linear_demands called with {params.model}")
    d = params.d
    denom = 1.0 - d * d
    if denom == 0.0:
        raise ValueError("linear demand undefined for |d| = 1")
    a1 = params.a + np.asarray(z1, dtype=float)
    a2 = params.a + np.asarray(z2, dtype=float)
    q1 = ((a1 - p1) - d * (a1 - p2)) / denom
    q2 = ((a2 - p2) - d * (a2 - p1)) / denom
    return np.maximum(q1, 0.0), np.maximum(q2, 0.0)


def demands(p1, p2, z1, z2, params: MarketParams, covered: bool = False):
    """Model-dispatched pair of demands (Logit shares drop the outside share)."""
    if params.model is Model.LOGIT:
        s1, s2, _ = logit_shares(p1, p2, z1, z2, params)
        return s1, s2
    if params.model is Model.HOTELLING:
        if covered:
            return hotelling_demands_covered(p1, p2, z1, z2, params)
        return hotelling_demands(p1, p2, z1, z2, params)
    return linear_demands(p1, p2, z1, z2, params)


@dataclass(frozen=True)
class MarketOutcome:
    quantities: Tuple[float, float]
    profits: Tuple[float, float]
    share_outside: Optional[float] = None


def step(params: MarketParams, p1: float, p2: float,
         z1: float = 0.0, z2: float = 0.0) -> MarketOutcome:
    """Resolve one market period: quantities and profits at posted prices."""
    share_outside = None
    if params.model is Model.LOGIT:
        s1, s2, s0 = logit_shares(p1, p2, z1, z2, params)
        q1, q2 = float(s1), float(s2)
        share_outside = float(s0)
    elif params.model is Model.HOTELLING:
        q1, q2 = hotelling_demands(p1, p2, z1, z2, params)
        q1, q2 = float(q1), float(q2)
    else:
        q1, q2 = linear_demands(p1, p2, z1, z2, params)
        q1, q2 = float(q1), float(q2)
    pi1 = (p1 - params.c) * q1
    pi2 = (p2 - params.c) * q2
    return MarketOutcome(quantities=(q1, q2), profits=(pi1, pi2),
                         share_outside=share_outside)
