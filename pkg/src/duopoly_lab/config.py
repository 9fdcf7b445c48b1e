"""Experiment configuration: defaults, TOML loading, and overrides."""

from __future__ import annotations

import itertools
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .agents.base import AGENT_NAMES
from .errors import ConfigError
from .markets import Model
from .shocks import REGIME_NAMES

ENV_PREFIX = "DUOPOLY_LAB_"

ALL_MARKETS = tuple(m.value for m in Model)


def default_pairings() -> List[Tuple[str, str]]:
    """All 10 unordered pairings of the four agent kinds."""
    return list(itertools.combinations_with_replacement(AGENT_NAMES, 2))


@dataclass
class ExperimentConfig:
    markets: List[str] = field(default_factory=lambda: list(ALL_MARKETS))
    regimes: List[str] = field(default_factory=lambda: list(REGIME_NAMES))
    pairings: List[Tuple[str, str]] = field(default_factory=default_pairings)
    seeds: int = 20
    base_seed: int = 1000
    horizon: int = 10_000
    window: int = 1_000
    mc_samples: int = 100_000
    mc_seed: int = 20240101
    out_dir: str = "results"
    jobs: int = 0                 # 0 = logical core count
    series: bool = False
    series_stride: int = 10
    swap_roles: bool = False
    grid_literal_upper: bool = False
    correlated_shocks: bool = False   # reserved; enabling it is an error
    quiet: bool = False
    agent_overrides: Dict[str, dict] = field(default_factory=dict)

    def validate(self) -> "ExperimentConfig":
        for m in self.markets:
            if m not in ALL_MARKETS:
                raise ConfigError(f"unknown market {m!r}; expected one of {ALL_MARKETS}")
        for r in self.regimes:
            if r not in REGIME_NAMES:
                raise ConfigError(f"unknown regime {r!r}; expected one of {REGIME_NAMES}")
        for pair in self.pairings:
            if len(pair) != 2:
                raise ConfigError(f"pairing {pair!r} must name exactly two agents")
            for a in pair:
                if a not in AGENT_NAMES:
                    raise ConfigError(f"unknown agent {a!r}; expected one of {AGENT_NAMES}")
        for a in self.agent_overrides:
            if a not in AGENT_NAMES:
                raise ConfigError(f"agent_overrides names unknown agent {a!r}")
        if self.correlated_shocks:
            raise ConfigError("correlated shock mode is reserved and not implemented")
        if self.seeds < 1:
            raise ConfigError("seeds must be >= 1")
        if self.window > self.horizon:
            raise ConfigError("window cannot exceed horizon")
        return self

    def resolved(self) -> dict:
        d = asdict(self)
        d["pairings"] = [list(p) for p in self.pairings]
        return d


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}

_BOOL_FIELDS = {"series", "swap_roles", "grid_literal_upper",
                "correlated_shocks", "quiet"}
_INT_FIELDS = {"seeds", "base_seed", "horizon", "window", "mc_samples",
               "mc_seed", "jobs", "series_stride"}
_LIST_FIELDS = {"markets", "regimes"}


def _parse_scalar(key: str, raw: str):
    if key in _BOOL_FIELDS:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"cannot parse boolean for {key}: {raw!r}")
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"cannot parse integer for {key}: {raw!r}") from None
    if key in _LIST_FIELDS:
        return [item.strip() for item in raw.split(",") if item.strip()]
    if key == "pairings":
        pairs = []
        for chunk in raw.split(","):
            names = chunk.strip().split(":")
            if len(names) != 2:
                raise ConfigError(f"pairing {chunk!r} must be 'agent:agent'")
            pairs.append((names[0], names[1]))
        return pairs
    return raw


def from_mapping(data: dict) -> ExperimentConfig:
    """Build a config from a parsed TOML mapping, rejecting unknown keys."""
    cfg = ExperimentConfig()
    for key, value in data.items():
        if key == "agents":
            if not isinstance(value, dict):
                raise ConfigError("[agents] must be a table of per-agent tables")
            cfg.agent_overrides = {k: dict(v) for k, v in value.items()}
            continue
        if key not in _FIELD_TYPES or key == "agent_overrides":
            raise ConfigError(f"unknown config key {key!r}")
        if key == "pairings":
            value = [tuple(p) for p in value]
        setattr(cfg, key, value)
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return from_mapping(data)


def apply_overrides(cfg: ExperimentConfig, pairs: List[str]) -> ExperimentConfig:
    """Apply repeatable KEY=VALUE overrides; dotted keys reach agent tables."""
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        key, raw = item.split("=", 1)
        key = key.strip()
        if key.startswith("agents."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"agent override {key!r} must be agents.<kind>.<param>")
            _, kind, param = parts
            if kind not in AGENT_NAMES:
                raise ConfigError(f"unknown agent {kind!r} in override {key!r}")
            try:
                value = float(raw)
                if value == int(value) and "." not in raw and "e" not in raw.lower():
                    value = int(raw)
            except ValueError:
                value = raw
            cfg.agent_overrides.setdefault(kind, {})[param] = value
            continue
        if key not in _FIELD_TYPES or key == "agent_overrides":
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, _parse_scalar(key, raw))
    return cfg


def apply_env_overrides(cfg: ExperimentConfig, environ=None) -> ExperimentConfig:
    """Pick up DUOPOLY_LAB_<KEY> environment variables (CI hook)."""
    environ = os.environ if environ is None else environ
    pairs = []
    for name, raw in environ.items():
        if not name.startswith(ENV_PREFIX):
            continue
        key = name[len(ENV_PREFIX):].lower()
        if key in _FIELD_TYPES and key != "agent_overrides":
            pairs.append(f"{key}={raw}")
    return apply_overrides(cfg, pairs)
