"""Brute-force and consistency oracles used to validate the solvers at desk
scale before trusting large-N runs. The grid scans re-evaluate the region
caps inline so they share no optimization code with the solvers."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, asdict

import numpy as np

from . import _kernels
from .channel import ChannelState, PowerBudget
from .config import SolverConfig
from .ma import MaDualPoint
from .rates import LN2, ResourceAllocation, log2_1p


@dataclass(frozen=True)
class GridSpec:
    points_per_axis: int
    axes: str = "t plus one free power per node (budget remainder on subcarrier 2)"

    def __post_init__(self):
        if self.points_per_axis < 10:
            raise ValueError("points_per_axis must be at least 10")


@dataclass
class OracleResult:
    bound: float
    alloc: ResourceAllocation
    error_bound: float
    wall_time: float

    def to_json(self) -> str:
        return json.dumps({
            "bound": self.bound,
            "alloc": json.loads(self.alloc.to_json()),
            "error_bound": self.error_bound,
            "wall_time": self.wall_time,
        })


def _lipschitz_error(csi: ChannelState, budget: PowerBudget, rho: float,
                     K: int) -> float:
    """Per-axis Lipschitz bound on the grid's discretization error.

    Power axes: |d/dp t*log2(1+gp/t)| <= g/ln2, scaled by the tightest rate
    weight the variable appears under. t axis: |d/dt t*log2(1+c/t)| <=
    log2(1+c/t), evaluated at the smallest grid t; full spacing is charged
    there because the optimum may fall beyond the first/last grid point.
    """
    g1m = float(np.max(csi.g1))
    g2m = float(np.max(csi.g2))
    gtm = float(max(np.max(csi.gt1), np.max(csi.gt2)))
    h_pow = 1.0 / (K - 1.0)
    err = 0.5 * h_pow * (budget.p1 * g1m / LN2
                         + budget.p2 * g2m / LN2 / rho
                         + budget.pr * gtm / LN2 * max(1.0, 1.0 / rho))
    t_min = 1.0 / (K + 1.0)
    n = csi.n_subcarriers
    lt = max(
        n * float(log2_1p(g1m * budget.p1 / t_min)),
        n * float(log2_1p(g2m * budget.p2 / t_min)) / rho,
        n * float(log2_1p(gtm * budget.pr / t_min)) * max(1.0, 1.0 / rho),
    )
    err += lt / (K + 1.0)
    return err


def grid_bruteforce_df(csi: ChannelState, budget: PowerBudget, rho: float,
                       grid: GridSpec) -> OracleResult:
    """Exhaustive lower bound on the multi-subcarrier DF boundary rate.

    N <= 2 only. Spends the full budgets (all caps are strictly increasing
    in every power, so an optimal allocation exists on that face) and scans
    t plus the free first-subcarrier powers. The reported bound is a
    guaranteed lower bound on the true optimum; the discretization error
    bound brackets it from above.
    """
    n = csi.n_subcarriers
    if n > 2:
        raise ValueError("grid oracle supports N <= 2 only")
    K = grid.points_per_axis
    start = time.perf_counter()
    if n == 1:
        best, bt = _kernels.oracle_df_scan_n1(csi.g1, csi.g2, csi.gt1, csi.gt2,
                                              budget.p1, budget.p2, budget.pr,
                                              rho, K)
        alloc = ResourceAllocation([budget.p1], [budget.p2], [budget.pr], bt)
    else:
        best, bt, p11, p21, pr1 = _kernels.oracle_df_scan_n2(
            csi.g1, csi.g2, csi.gt1, csi.gt2,
            budget.p1, budget.p2, budget.pr, rho, K)
        alloc = ResourceAllocation([p11, budget.p1 - p11],
                                   [p21, budget.p2 - p21],
                                   [pr1, budget.pr - pr1], bt)
    wall = time.perf_counter() - start
    err = _lipschitz_error(csi, budget, rho, K)
    return OracleResult(float(best), alloc, float(err), wall)


def grid_bruteforce_psc_df(csi: ChannelState, budget: PowerBudget, rho: float,
                           grid: GridSpec) -> OracleResult:
    """Exhaustive lower bound for the per-subcarrier DF boundary rate (N = 2).

    The per-subcarrier min couples the relay power with the terminal powers,
    so this one is a genuine 4-D scan; keep the resolution moderate.
    """
    if csi.n_subcarriers != 2:
        raise ValueError("per-subcarrier grid oracle supports N = 2 only")
    K = grid.points_per_axis
    start = time.perf_counter()
    best, bt = _kernels.oracle_psc_scan_n2(csi.g1, csi.g2, csi.gt1, csi.gt2,
                                           budget.p1, budget.p2, budget.pr,
                                           rho, K)
    wall = time.perf_counter() - start
    err = _lipschitz_error(csi, budget, rho, K)
    alloc = ResourceAllocation([budget.p1 / 2] * 2, [budget.p2 / 2] * 2,
                               [budget.pr / 2] * 2, bt)
    return OracleResult(float(best), alloc, float(err), wall)


@dataclass
class ResidualReport:
    stationarity: float
    infeasibility: float
    slackness: float
    simplex_deviation: float


def kkt_residuals(alloc: ResourceAllocation, dual: MaDualPoint, t: float,
                  rho: float, csi: ChannelState, budget: PowerBudget,
                  active_tol: float = 1e-12) -> ResidualReport:
    """First-order optimality report for an MA allocation/dual pair.

    Stationarity evaluates the Lagrangian derivative per subcarrier: its
    absolute value where the power is positive, its negative part where the
    power is zero.
    """
    lam1, lam2, lam3 = dual.lam
    a1, a2 = dual.alpha
    p1, p2 = alloc.p1, alloc.p2
    s = csi.g1 * p1 + csi.g2 * p2
    d1 = (a1
          - t * csi.g1 * lam3 / ((rho + 1.0) * (t + s) * LN2)
          - t * csi.g1 * lam1 / ((t + csi.g1 * p1) * LN2))
    d2 = (a2
          - t * csi.g2 * lam3 / ((rho + 1.0) * (t + s) * LN2)
          - t * csi.g2 * lam2 / (rho * (t + csi.g2 * p2) * LN2))
    stat = 0.0
    for dv, pv in ((d1, p1), (d2, p2)):
        active = pv > active_tol
        if np.any(active):
            stat = max(stat, float(np.max(np.abs(dv[active]))))
        if np.any(~active):
            stat = max(stat, float(np.max(np.maximum(0.0, -dv[~active]))))

    infeas = max(0.0,
                 float(np.sum(p1)) - budget.p1,
                 float(np.sum(p2)) - budget.p2,
                 float(-min(np.min(p1), np.min(p2))))

    r1, r2, r3 = _kernels.ma_rate_terms(p1, p2, t, rho, csi.g1, csi.g2)
    rate = min(r1, r2, r3)
    slack = max(a1 * abs(float(np.sum(p1)) - budget.p1),
                a2 * abs(float(np.sum(p2)) - budget.p2),
                lam1 * abs(rate - r1), lam2 * abs(rate - r2),
                lam3 * abs(rate - r3))
    return ResidualReport(stationarity=stat, infeasibility=infeas,
                          slackness=slack,
                          simplex_deviation=abs(lam1 + lam2 + lam3 - 1.0))


def simplex_dual_scan(t: float, rho: float, csi: ChannelState,
                      budget: PowerBudget, resolution: int,
                      config: SolverConfig | None = None):
    """Best dual value over the full multiplier simplex.

    Solves the inner price problem by the ellipsoid method (general-dual
    power formulas) at every grid point of {lam >= 0, sum lam = 1}; returns
    (max dual value, argmax lam). Used to confirm that restricting the search
    to the two one-dimensional faces loses nothing.
    """
    if csi.n_subcarriers > 4:
        raise ValueError("simplex scan supports N <= 4 only")
    if resolution > 100:
        raise ValueError("resolution capped at 100")
    config = config or SolverConfig()
    best = -np.inf
    best_lam = (0.0, 0.0, 1.0)
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            lam = (i / resolution, j / resolution,
                   1.0 - (i + j) / resolution)
            # best evaluated dual value is a valid bound even if the gap
            # criterion was not reached at this grid point
            *_, dval, _, _, _ = _kernels.ma_inner_ellipsoid(
                lam[0], lam[1], lam[2], t, rho, csi.g1, csi.g2,
                budget.p1, budget.p2, config.eps_dual, config.max_iters, True)
            if dval > best:
                best = dval
                best_lam = lam
    return float(best), best_lam
