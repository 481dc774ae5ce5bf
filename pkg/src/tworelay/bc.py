"""Broadcast-phase subproblem solver: nested bisection over the rate-weight
split and the relay power price, with a closed-form quadratic per-subcarrier
power allocation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import ChannelState, PowerBudget
from .config import SolverConfig

ALPHA3_REL_TOL = 1e-10   # inner bisection stop width, relative to the bound
LAMBDA5_TOL = 1e-8


@dataclass(frozen=True)
class BcDualPoint:
    lambda5: float
    alpha3: float

    def __post_init__(self):
        if not (0.0 <= self.lambda5 <= 1.0):
            raise ValueError("lambda5 must lie in [0, 1]")
        if self.alpha3 < 0.0:
            raise ValueError("alpha3 must be nonnegative")


@dataclass
class BcSolution:
    rate: float
    pr: np.ndarray
    dual: BcDualPoint
    gap: float


def _check_t(t: float) -> None:
    if not (0.0 < t < 1.0):
        raise ValueError("t must lie strictly inside (0, 1)")


def quadratic_power_allocation(dual: BcDualPoint, t: float, rho: float,
                               csi: ChannelState) -> np.ndarray:
    """Relay powers from the per-subcarrier stationarity quadratic.

    Positive root of
      (1-t) gt2 (1-lam5) / (1-t + gt2 x) + (1-t) gt1 lam5 / (rho (1-t + gt1 x))
        = alpha3 ln2,
    zero when there is none.
    """
    _check_t(t)
    if dual.alpha3 <= 0.0:
        raise ValueError("alpha3 must be positive for the quadratic")
    return _kernels.bc_power_vector(dual.lambda5, dual.alpha3, t, rho,
                                    csi.gt1, csi.gt2)


def alpha3_bound(lambda5: float, rho: float, csi: ChannelState) -> float:
    """Upper bound on the optimal relay power price."""
    return float(_kernels.bc_alpha_bound(lambda5, rho, csi.gt1, csi.gt2))


def bc_dual_value(dual: BcDualPoint, t: float, rho: float, csi: ChannelState,
                  budget: PowerBudget) -> float:
    """Exact BC dual function value at the dual point."""
    _check_t(t)
    pr = _kernels.bc_power_vector(dual.lambda5, dual.alpha3, t, rho,
                                  csi.gt1, csi.gt2)
    r4, r5 = _kernels.bc_rate_terms(pr, t, rho, csi.gt1, csi.gt2)
    return float(-(1.0 - dual.lambda5) * r4 - dual.lambda5 * r5
                 + dual.alpha3 * (pr.sum() - budget.pr))


def solve_bc(t: float, rho: float, csi: ChannelState, budget: PowerBudget,
             config: SolverConfig | None = None) -> BcSolution:
    """Maximize the BC-phase rate min(r4, r5) at fixed t.

    Outer bisection on the weight of the reverse-direction rate driven by
    sign(r4 - r5); inner bisection on the power price driven by the budget,
    kept on the feasible side so the returned allocation never exceeds it.
    """
    _check_t(t)
    if rho <= 0:
        raise ValueError("rho must be positive")
    config = config or SolverConfig()
    lam5, a3, pr, r4, r5, dval = _kernels.bc_solve_kernel(
        t, rho, csi.gt1, csi.gt2, budget.pr, LAMBDA5_TOL, ALPHA3_REL_TOL,
        max(config.max_iters, 60))
    rate = float(min(r4, r5))
    gap = abs(-float(dval) - rate)
    return BcSolution(rate=rate, pr=pr, dual=BcDualPoint(float(lam5), float(a3)),
                      gap=gap)
