"""Analytic multiplexing-gain regions and empirical low/high-SNR diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelState, PowerBudget, SnrScale, scale_budget
from .config import SolverConfig
from .rates import log2_1p
from .region import (Strategy, T_MARGIN, golden_section_max,
                     solve_boundary_point_af, solve_boundary_point_cutset,
                     solve_boundary_point_df, solve_boundary_point_psc_df)

UNDERFLOW_FLOOR = 1e-14


@dataclass(frozen=True)
class GainRegion:
    """Intersection of half planes a*r12 + b*r21 <= c in the first quadrant."""

    half_planes: tuple[tuple[float, float, float], ...]
    strategy: Strategy

    def contains(self, r12: float, r21: float, tol: float = 1e-9) -> bool:
        if r12 < -tol or r21 < -tol:
            return False
        return all(a * r12 + b * r21 <= c + tol for a, b, c in self.half_planes)

    def vertices(self) -> list[tuple[float, float]]:
        """Corner points, counterclockwise from the origin."""
        planes = list(self.half_planes) + [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
        pts = set()
        for i in range(len(planes)):
            for j in range(i + 1, len(planes)):
                a1, b1, c1 = planes[i]
                a2, b2, c2 = planes[j]
                det = a1 * b2 - a2 * b1
                if abs(det) < 1e-12:
                    continue
                x = (c1 * b2 - c2 * b1) / det
                y = (a1 * c2 - a2 * c1) / det
                if self.contains(x, y, tol=1e-9):
                    pts.add((round(x, 12), round(y, 12)))
        return sorted(pts, key=lambda p: math.atan2(p[1], p[0] + 1e-15))


def multiplexing_region(strategy: Strategy, n_subcarriers: int) -> GainRegion:
    """High-SNR gain region: the DF strategies share the pentagon
    {r12 + 2 r21 <= N, 2 r12 + r21 <= N}; AF and the cut-set bound share the
    square with side N/2."""
    if n_subcarriers < 1:
        raise ValueError("n_subcarriers must be >= 1")
    n = float(n_subcarriers)
    if strategy in (Strategy.MSC_DF, Strategy.PSC_DF):
        planes = ((1.0, 2.0, n), (2.0, 1.0, n))
    else:
        planes = ((1.0, 0.0, n / 2.0), (0.0, 1.0, n / 2.0))
    return GainRegion(planes, strategy)


_POINT_SOLVERS = {
    Strategy.MSC_DF: solve_boundary_point_df,
    Strategy.PSC_DF: solve_boundary_point_psc_df,
    Strategy.AF: solve_boundary_point_af,
    Strategy.CUTSET: solve_boundary_point_cutset,
}


def df_rate_equal_power(rho: float, csi: ChannelState, budget: PowerBudget,
                        t_tol: float = 1e-6) -> float:
    """Multi-subcarrier DF boundary rate with equal per-subcarrier powers
    (only the phase split is optimized)."""
    n = csi.n_subcarriers
    p1 = np.full(n, budget.p1 / n)
    p2 = np.full(n, budget.p2 / n)
    pr = np.full(n, budget.pr / n)

    def objective(t):
        s = 1.0 - t
        r1 = t * float(np.sum(log2_1p(csi.g1 * p1 / t)))
        r2 = (t / rho) * float(np.sum(log2_1p(csi.g2 * p2 / t)))
        r3 = (t / (rho + 1.0)) * float(np.sum(log2_1p((csi.g1 * p1 + csi.g2 * p2) / t)))
        r4 = s * float(np.sum(log2_1p(csi.gt2 * pr / s)))
        r5 = (s / rho) * float(np.sum(log2_1p(csi.gt1 * pr / s)))
        return min(r1, r2, r3, r4, r5)

    _, value = golden_section_max(objective, T_MARGIN, 1.0 - T_MARGIN, t_tol)
    return value


def empirical_slope(strategy: Strategy, rho: float, csi: ChannelState,
                    base_budget: PowerBudget, x_grid,
                    config: SolverConfig | None = None,
                    power_mode: str = "optimal") -> list[tuple[float, float]]:
    """Boundary rate normalized by log2(x) along a grid of power scales."""
    if power_mode not in ("optimal", "equal"):
        raise ValueError("power_mode must be 'optimal' or 'equal'")
    config = config or SolverConfig()
    out = []
    for x in x_grid:
        if x <= 1.0:
            raise ValueError("slope grid entries must exceed 1")
        budget = scale_budget(SnrScale(base_budget, float(x)))
        if power_mode == "equal":
            if strategy is not Strategy.MSC_DF:
                raise ValueError("equal-power slopes implemented for DF only")
            r12 = df_rate_equal_power(rho, csi, budget)
        else:
            r12 = _POINT_SOLVERS[strategy](rho, csi, budget, config).rate.r12
        out.append((float(x), r12 / math.log2(x)))
    return out


def low_snr_gap(rho: float, csi: ChannelState, base_budget: PowerBudget,
                x_grid, config: SolverConfig | None = None
                ) -> list[tuple[float, float, bool]]:
    """Cut-set to multi-subcarrier-DF boundary rate ratio along decreasing x.

    Returns (x, ratio, underflow) triples; once either rate drops below the
    floating floor the ratio is reported as 1 with the underflow flag set.
    """
    config = config or SolverConfig()
    out = []
    for x in x_grid:
        if x <= 0.0:
            raise ValueError("scale entries must be positive")
        budget = scale_budget(SnrScale(base_budget, float(x)))
        r_df = solve_boundary_point_df(rho, csi, budget, config).rate.r12
        r_out = solve_boundary_point_cutset(rho, csi, budget, config).rate.r12
        if r_df < UNDERFLOW_FLOOR or r_out < UNDERFLOW_FLOOR:
            out.append((float(x), 1.0, True))
        else:
            out.append((float(x), r_out / r_df, False))
    return out
