"""Duopoly pricing lab: learning agents, demand shocks, collusion metrics."""

__version__ = "0.1.0"
