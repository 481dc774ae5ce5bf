"""Solver tolerances shared by the MA/BC dual solvers and the region sweep."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields


@dataclass(frozen=True)
class SolverConfig:
    """Stopping tolerances for the dual solvers.

    eps_dual   : ellipsoid stopping threshold on sqrt(eta' A eta)
    eps_bisect : interval width at which the lambda bisections stop
    max_iters  : ellipsoid iteration cap per inner solve
    eps_feas   : constraint tolerance (budgets, slackness, stationarity)
    """

    eps_dual: float = 1e-7
    eps_bisect: float = 1e-8
    max_iters: int = 500
    eps_feas: float = 1e-6

    def __post_init__(self):
        if not (self.eps_dual > 0 and self.eps_bisect > 0 and self.eps_feas > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    @classmethod
    def from_json(cls, path: str) -> "SolverConfig":
        with open(path) as fh:
            raw = json.load(fh)
        known = {f.name for f in fields(cls)}
        bad = set(raw) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        return cls(**raw)
