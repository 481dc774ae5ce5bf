"""Boundary points and region sweeps for the four relay strategies.

Each boundary point at rate ratio rho maximizes the forward rate; for the
DF strategies and the cut-set bound that is a golden-section search over the
phase split t of min{MA rate, BC rate}, which is concave in t (both phase
rates are perspectives of concave functions).
"""

from __future__ import annotations

import enum
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bc import solve_bc
from .channel import ChannelState, PowerBudget
from .config import SolverConfig
from .ma import SolverError, solve_ma
from .rates import RatePair, ResourceAllocation, log2_1p

T_MARGIN = 1e-4      # excluded band at both ends of the open interval (0,1)
T_TOL = 1e-6         # golden-section stop width
PSC_ITERS = 1500
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Strategy(enum.Enum):
    MSC_DF = "msc-df"
    PSC_DF = "psc-df"
    AF = "af"
    CUTSET = "cutset"


@dataclass(frozen=True)
class BoundaryPoint:
    rho: float
    rate: RatePair
    alloc: ResourceAllocation
    t_star: float
    strategy: Strategy


@dataclass
class RegionBoundary:
    points: list[BoundaryPoint]
    csi_digest: str
    budget: PowerBudget
    failures: list[tuple[float, str]] = field(default_factory=list)


def csi_digest(csi: ChannelState) -> str:
    return hashlib.sha256(csi.to_json().encode()).hexdigest()


def golden_section_max(fn, lo: float, hi: float, tol: float):
    """Maximize a unimodal function on [lo, hi]; returns the best probe.

    Keeps every evaluation and returns the best one, so the result is a
    certified function value even on kinked objectives.
    """
    evals = {}

    def probe(x):
        if x not in evals:
            evals[x] = fn(x)
        return evals[x]

    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = probe(c), probe(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = probe(d)
        else:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = probe(c)
    best_t = max(evals, key=lambda x: evals[x])
    return best_t, evals[best_t]


def waterfill(gains, budget: float, t_scale: float) -> np.ndarray:
    """Single-user water-filling: maximize sum t*log2(1+g p/t), sum p <= budget.

    Exact breakpoint method; spends the budget exactly whenever some gain is
    positive.
    """
    g = np.asarray(gains, dtype=float)
    p = np.zeros_like(g)
    if budget <= 0.0 or not np.any(g > 0):
        return p
    pos = np.flatnonzero(g > 0)
    base = t_scale / g[pos]
    order = np.argsort(base)
    b = base[order]
    csum = np.cumsum(b)
    k_active = 1
    for k in range(1, len(b) + 1):
        mu = (budget + csum[k - 1]) / k
        if mu > b[k - 1]:
            k_active = k
    mu = (budget + csum[k_active - 1]) / k_active
    levels = np.maximum(0.0, mu - base)
    p[pos] = levels
    return p


def _df_phase_rates(t, rho, csi, budget, config):
    ma = solve_ma(t, rho, csi, budget, config)
    bcs = solve_bc(t, rho, csi, budget, config)
    return min(ma.rate, bcs.rate), ma, bcs


def solve_boundary_point_df(rho: float, csi: ChannelState, budget: PowerBudget,
                            config: SolverConfig | None = None,
                            t_tol: float = T_TOL) -> BoundaryPoint:
    """Boundary point of the multi-subcarrier DF region at ratio rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    config = config or SolverConfig()
    cache = {}

    def objective(t):
        try:
            value, ma, bcs = _df_phase_rates(t, rho, csi, budget, config)
        except SolverError as exc:
            raise SolverError(f"{exc} (at t={t:.6g})", payload=exc.payload) from exc
        cache[t] = (ma, bcs)
        return value

    t_star, r12 = golden_section_max(objective, T_MARGIN, 1.0 - T_MARGIN, t_tol)
    ma, bcs = cache[t_star]
    alloc = ResourceAllocation(ma.p1, ma.p2, bcs.pr, t_star)
    return BoundaryPoint(rho, RatePair(r12, rho * r12), alloc, t_star,
                         Strategy.MSC_DF)


def solve_boundary_point_cutset(rho: float, csi: ChannelState,
                                budget: PowerBudget,
                                config: SolverConfig | None = None,
                                t_tol: float = T_TOL) -> BoundaryPoint:
    """Cut-set bound boundary point: the MA phase decouples into two
    independent water-fillings once the sum-rate constraint is dropped."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    config = config or SolverConfig()
    cache = {}

    def objective(t):
        p1 = waterfill(csi.g1, budget.p1, t)
        p2 = waterfill(csi.g2, budget.p2, t)
        r1 = t * float(np.sum(log2_1p(csi.g1 * p1 / t)))
        r2 = (t / rho) * float(np.sum(log2_1p(csi.g2 * p2 / t)))
        bcs = solve_bc(t, rho, csi, budget, config)
        cache[t] = (p1, p2, bcs)
        return min(r1, r2, bcs.rate)

    t_star, r12 = golden_section_max(objective, T_MARGIN, 1.0 - T_MARGIN, t_tol)
    p1, p2, bcs = cache[t_star]
    alloc = ResourceAllocation(p1, p2, bcs.pr, t_star)
    return BoundaryPoint(rho, RatePair(r12, rho * r12), alloc, t_star,
                         Strategy.CUTSET)


def solve_boundary_point_psc_df(rho: float, csi: ChannelState,
                                budget: PowerBudget,
                                config: SolverConfig | None = None,
                                t_tol: float = T_TOL,
                                iters: int = PSC_ITERS) -> BoundaryPoint:
    """Per-subcarrier DF boundary point by projected supergradient ascent.

    The inner allocation problem is concave (per-subcarrier mins of concave
    rates); the returned point is always feasible for the per-subcarrier
    region, so its rate is a certified achievable value.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    cache = {}

    def objective(t):
        p1, p2, pr, value = _kernels.psc_ascent(t, rho, csi.g1, csi.g2,
                                                csi.gt1, csi.gt2,
                                                budget.p1, budget.p2, budget.pr,
                                                iters)
        cache[t] = (p1, p2, pr)
        return value

    t_star, r12 = golden_section_max(objective, T_MARGIN, 1.0 - T_MARGIN, t_tol)
    p1, p2, pr = cache[t_star]
    alloc = ResourceAllocation(p1, p2, pr, t_star)
    return BoundaryPoint(rho, RatePair(r12, rho * r12), alloc, t_star,
                         Strategy.PSC_DF)


def _af_caps(p1, p2, pr, csi):
    a = pr / (p1 * csi.g1 + p2 * csi.g2 + 1.0)
    cap12 = 0.5 * float(np.sum(log2_1p(2.0 * p1 * csi.g1 * csi.gt2 * a
                                       / (1.0 + csi.gt2 * a))))
    cap21 = 0.5 * float(np.sum(log2_1p(2.0 * p2 * csi.g2 * csi.gt1 * a
                                       / (1.0 + csi.gt1 * a))))
    return cap12, cap21


def solve_boundary_point_af(rho: float, csi: ChannelState, budget: PowerBudget,
                            config: SolverConfig | None = None,
                            refine: bool = False,
                            refine_rounds: int = 40) -> BoundaryPoint:
    """AF boundary point under equal power allocation (t fixed at 1/2).

    The fixed-allocation AF region is a rectangle, so the ray of slope rho
    leaves it at min(cap12, cap21/rho). The optional refinement runs a
    monotone cyclic coordinate ascent on the three power vectors.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    n = csi.n_subcarriers
    p1 = np.full(n, budget.p1 / n)
    p2 = np.full(n, budget.p2 / n)
    pr = np.full(n, budget.pr / n)

    def value(v1, v2, vr):
        cap12, cap21 = _af_caps(v1, v2, vr, csi)
        return min(cap12, cap21 / rho)

    if refine:
        budgets = (budget.p1, budget.p2, budget.pr)
        vecs = [p1, p2, pr]
        best = value(*vecs)
        step = 0.25
        for _ in range(refine_rounds):
            improved = False
            for bi in range(3):
                grad = _numeric_grad(lambda v, bi=bi: value(*_swap(vecs, bi, v)),
                                     vecs[bi])
                trial_step = step * budgets[bi] / (np.linalg.norm(grad) + 1e-300)
                trial = vecs[bi] + trial_step * grad
                trial = _project(trial, budgets[bi])
                cand = value(*_swap(vecs, bi, trial))
                if cand > best:
                    vecs[bi] = trial
                    best = cand
                    improved = True
            if not improved:
                step *= 0.5
                if step < 1e-4:
                    break
        p1, p2, pr = vecs

    cap12, cap21 = _af_caps(p1, p2, pr, csi)
    r12 = min(cap12, cap21 / rho)
    alloc = ResourceAllocation(p1, p2, pr, 0.5)
    return BoundaryPoint(rho, RatePair(r12, rho * r12), alloc, 0.5, Strategy.AF)


def _swap(vecs, idx, v):
    out = list(vecs)
    out[idx] = v
    return out


def _project(p, b):
    q = np.array(p, dtype=float)
    _kernels._project_budget(q, b)
    return q


def _numeric_grad(fn, p, h=1e-6):
    g = np.zeros_like(p)
    base = fn(p)
    for i in range(len(p)):
        q = p.copy()
        q[i] += h * max(1.0, abs(p[i]))
        g[i] = (fn(q) - base) / (h * max(1.0, abs(p[i])))
    return g


_SOLVERS = {
    Strategy.MSC_DF: solve_boundary_point_df,
    Strategy.PSC_DF: solve_boundary_point_psc_df,
    Strategy.AF: solve_boundary_point_af,
    Strategy.CUTSET: solve_boundary_point_cutset,
}


def _solve_point(args):
    strategy, rho, csi, budget, config = args
    return _SOLVERS[strategy](rho, csi, budget, config)


def sweep_region(strategy: Strategy, rho_grid, csi: ChannelState,
                 budget: PowerBudget, config: SolverConfig | None = None,
                 jobs: int = 1) -> RegionBoundary:
    """One boundary point per rho; failures are recorded, not raised."""
    grid = [float(r) for r in rho_grid]
    if not grid:
        raise ValueError("rho grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("rho grid must be strictly increasing")
    config = config or SolverConfig()
    points = []
    failures = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_solve_point,
                                   (strategy, rho, csi, budget, config)): rho
                       for rho in grid}
            for fut, rho in futures.items():
                try:
                    points.append(fut.result())
                except (SolverError, ValueError) as exc:
                    failures.append((rho, str(exc)))
    else:
        for rho in grid:
            try:
                points.append(_solve_point((strategy, rho, csi, budget, config)))
            except (SolverError, ValueError) as exc:
                failures.append((rho, str(exc)))
    points.sort(key=lambda p: p.rho)
    failures.sort(key=lambda f: f[0])
    return RegionBoundary(points, csi_digest(csi), budget, failures)
