"""Multiple-access-phase subproblem solver.

Dual search structure: a branch test at the dual point (0,0,1) decides which
one-dimensional face of the multiplier simplex carries an optimum, a
bisection walks that face using the directional subgradient r1-r3 (or
r2-r3), and each probe solves the two power prices with a cut ellipsoid
around closed-form per-subcarrier power allocations. A recovery step fixes
the power split on subcarriers where the closed forms are indeterminate.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .channel import ChannelState, PowerBudget
from .config import SolverConfig
from .rates import LN2

FLOOR_FRAC = 1e-12          # alpha floor, relative to its upper bound
DEGENERACY_REL = 1e-7       # relative tie threshold for primal recovery
LAMBDA_EDGE = 1e-6          # below this, a rate multiplier counts as inactive


class SolverError(RuntimeError):
    """Solver did not converge; carries the last iterate for diagnosis."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class DegenerateDualError(ValueError):
    """A power-price component is zero where a closed form divides by it."""


class Branch(enum.Enum):
    LAMBDA1 = "lambda1"
    LAMBDA2 = "lambda2"
    AT_LAMBDA0 = "at_lambda0"


@dataclass(frozen=True)
class MaDualPoint:
    lam: tuple[float, float, float]
    alpha: tuple[float, float]

    def __post_init__(self):
        if any(v < 0 for v in self.lam) or any(v < 0 for v in self.alpha):
            raise ValueError("dual variables must be nonnegative")


@dataclass
class MaSolution:
    rate: float
    p1: np.ndarray
    p2: np.ndarray
    dual: MaDualPoint
    gap: float
    recovery_warning: bool = False


def _check_t(t: float) -> None:
    if not (0.0 < t < 1.0):
        raise ValueError("t must lie strictly inside (0, 1)")


def _floored_alpha(dual: MaDualPoint, rho: float, csi: ChannelState) -> tuple[float, float]:
    lam1, lam2, lam3 = dual.lam
    a1max, a2max = alpha_bounds(dual.lam, rho, csi)
    a1, a2 = dual.alpha
    if a1 <= 0.0 and a1max > 0.0 and a1max * FLOOR_FRAC == 0.0:
        raise DegenerateDualError("alpha1 is zero where formulas divide by it; perturb alpha")
    if a2 <= 0.0 and a2max > 0.0 and a2max * FLOOR_FRAC == 0.0:
        raise DegenerateDualError("alpha2 is zero where formulas divide by it; perturb alpha")
    scale = max(a1max, a2max, 1e-300)
    f1 = FLOOR_FRAC * (a1max if a1max > 0.0 else scale)
    f2 = FLOOR_FRAC * (a2max if a2max > 0.0 else scale)
    return max(a1, f1), max(a2, f2)


def _validate_structured(lam) -> None:
    lam1, lam2, lam3 = lam
    if lam1 > 0.0 and lam2 > 0.0:
        raise ValueError("structured duals require lambda1 = 0 or lambda2 = 0")


def kkt_power_allocation(dual: MaDualPoint, t: float, rho: float,
                         csi: ChannelState) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form per-subcarrier powers for a structured dual point.

    Evaluates the four KKT cases (branch-specific both-positive form, one
    node silent, both silent) and keeps the per-subcarrier Lagrangian
    minimizer, ties broken toward the both-positive case.
    """
    _check_t(t)
    _validate_structured(dual.lam)
    a1, a2 = _floored_alpha(dual, rho, csi)
    lam1, lam2, lam3 = dual.lam
    p1, p2, _ = _kernels.ma_powers_structured(lam1, lam2, lam3, a1, a2,
                                              t, rho, csi.g1, csi.g2)
    return p1, p2


def cubic_power_allocation(dual: MaDualPoint, t: float, rho: float,
                           csi: ChannelState) -> tuple[np.ndarray, np.ndarray]:
    """Per-subcarrier powers for an arbitrary simplex dual point.

    The both-positive case solves the aggregate-load cubic in closed form;
    degenerate faces (a vanished multiplier) use the pole of the vanished
    fraction, which reproduces the structured formulas exactly.
    """
    _check_t(t)
    a1, a2 = _floored_alpha(dual, rho, csi)
    lam1, lam2, lam3 = dual.lam
    p1, p2, _ = _kernels.ma_powers_cubic(lam1, lam2, lam3, a1, a2,
                                         t, rho, csi.g1, csi.g2)
    return p1, p2


def cardano_real_roots(b: float, c: float, d: float) -> list[float]:
    """Real roots of the monic cubic x^3 + b x^2 + c x + d."""
    roots, count = _kernels.cardano_real_roots(float(b), float(c), float(d))
    return [float(r) for r in roots[:count]]


def ma_dual_value(dual: MaDualPoint, t: float, rho: float, csi: ChannelState,
                  budget: PowerBudget, use_cubic: bool = False) -> float:
    """Exact dual function value D(lam, alpha) at the (floored) dual point."""
    _check_t(t)
    a1, a2 = _floored_alpha(dual, rho, csi)
    lam1, lam2, lam3 = dual.lam
    fn = _kernels.ma_powers_cubic if use_cubic else _kernels.ma_powers_structured
    if not use_cubic:
        _validate_structured(dual.lam)
    _, _, total = fn(lam1, lam2, lam3, a1, a2, t, rho, csi.g1, csi.g2)
    return float(total - a1 * budget.p1 - a2 * budget.p2)


def alpha_subgradient(p1: np.ndarray, p2: np.ndarray,
                      budget: PowerBudget) -> tuple[float, float]:
    """Subgradient of the dual in the power prices: budget surpluses."""
    return float(np.sum(p1) - budget.p1), float(np.sum(p2) - budget.p2)


def alpha_bounds(lam, rho: float, csi: ChannelState) -> tuple[float, float]:
    """Upper bounds on the optimal power prices for the given multipliers."""
    lam1, lam2, lam3 = lam
    a1, a2 = _kernels.ma_alpha_bounds(lam1, lam2, lam3, rho,
                                      float(np.max(csi.g1)), float(np.max(csi.g2)))
    return float(a1), float(a2)


def ellipsoid_step(alpha: tuple[float, float], shape: np.ndarray,
                   eta: tuple[float, float]) -> tuple[tuple[float, float], np.ndarray]:
    """One raw ellipsoid cut update (center and shape matrix) for a cut vector."""
    A = np.asarray(shape, dtype=float)
    g = np.asarray(eta, dtype=float)
    Ag = A @ g
    gAg = float(g @ Ag)
    if gAg <= 0.0:
        raise ValueError("cut vector has nonpositive ellipsoid norm")
    gt = Ag / math.sqrt(gAg)
    center = np.asarray(alpha, dtype=float) - gt / 3.0
    A_new = (4.0 / 3.0) * (A - (2.0 / 3.0) * np.outer(gt, gt))
    return (float(center[0]), float(center[1])), A_new


def ellipsoid_inner_solve(lam, t: float, rho: float, csi: ChannelState,
                          budget: PowerBudget, config: SolverConfig,
                          use_cubic: bool = False):
    """Solve the inner price problem; returns (alpha*, (p1, p2), D, gap bound).

    Raises SolverError with the last iterate attached if the gap bound is
    not reached within config.max_iters.
    """
    _check_t(t)
    if not use_cubic:
        _validate_structured(lam)
    lam1, lam2, lam3 = lam
    a1, a2, p1, p2, dval, gap, iters, converged = _kernels.ma_inner_ellipsoid(
        lam1, lam2, lam3, t, rho, csi.g1, csi.g2, budget.p1, budget.p2,
        config.eps_dual, config.max_iters, use_cubic)
    if not converged:
        raise SolverError(
            f"ellipsoid did not reach gap {config.eps_dual:g} in {iters} iterations",
            payload={"alpha": (a1, a2), "gap": gap, "lam": tuple(lam)})
    return (float(a1), float(a2)), (p1, p2), float(dval), float(gap)


def classify_branch(r1: float, r2: float, r3: float) -> Branch:
    """Face selection from the rates at the dual point (0,0,1).

    If the aggregate rate dominates both individual rates the point itself is
    optimal; a nonpositive directional derivative into both faces (neither
    inequality holds) pins it as well.
    """
    ge1 = r3 >= r1
    ge2 = r3 >= r2
    if ge1 and ge2:
        return Branch.AT_LAMBDA0
    if ge1:
        return Branch.LAMBDA1
    if ge2:
        return Branch.LAMBDA2
    return Branch.AT_LAMBDA0


def lambda_branch_test(t: float, rho: float, csi: ChannelState,
                       budget: PowerBudget, config: SolverConfig) -> Branch:
    """Run the inner solve at (0,0,1) and classify the optimal face."""
    _, (p1, p2), _, _ = ellipsoid_inner_solve((0.0, 0.0, 1.0), t, rho, csi,
                                              budget, config)
    r1, r2, r3 = _kernels.ma_rate_terms(p1, p2, t, rho, csi.g1, csi.g2)
    return classify_branch(r1, r2, r3)


def _lam_on_branch(branch: Branch, lam3: float) -> tuple[float, float, float]:
    if branch is Branch.LAMBDA1:
        return (1.0 - lam3, 0.0, lam3)
    return (0.0, 1.0 - lam3, lam3)


def recover_primal(dual: MaDualPoint, t: float, rho: float, csi: ChannelState,
                   budget: PowerBudget, config: SolverConfig,
                   p1: np.ndarray | None = None, p2: np.ndarray | None = None,
                   ) -> tuple[np.ndarray, np.ndarray, bool]:
    """Feasible primal powers from a converged dual point.

    On subcarriers where the both-positive case is indeterminate (tied price
    ratios at an aggregate-rate-only dual point) stationarity pins only the
    aggregate load; the split between the nodes is set by a bisection on the
    node-1 share so both budgets are met. Non-degenerate subcarriers keep
    their closed-form powers. Returns (p1, p2, warning).
    """
    _check_t(t)
    if p1 is None or p2 is None:
        p1, p2 = kkt_power_allocation(dual, t, rho, csi)
    p1 = np.array(p1, dtype=float)
    p2 = np.array(p2, dtype=float)
    lam1, lam2, lam3 = dual.lam
    a1, a2 = _floored_alpha(dual, rho, csi)
    eps = config.eps_feas

    def residual_ok(p1v, p2v):
        # budgets never exceeded; complementary slackness within tolerance
        e1 = float(np.sum(p1v)) - budget.p1
        e2 = float(np.sum(p2v)) - budget.p2
        ok1 = e1 <= eps * budget.p1 and a1 * abs(e1) <= eps * budget.p1
        ok2 = e2 <= eps * budget.p2 and a2 * abs(e2) <= eps * budget.p2
        return ok1 and ok2

    if residual_ok(p1, p2) or max(lam1, lam2) > LAMBDA_EDGE:
        return p1, p2, False

    # indeterminate split: widen the tie threshold until the budgets resolve
    tie = np.abs(a1 * csi.g2 - a2 * csi.g1)
    ref = np.maximum(a1 * csi.g2, a2 * csi.g1)
    keep = (p1, p2)
    tau = DEGENERACY_REL
    while tau <= 1e-3:
        mask = tie <= tau * ref
        if np.any(mask):
            s = t * csi.g1 * lam3 / ((rho + 1.0) * a1 * LN2) - t
            s = np.maximum(s, 0.0)
            q1, q2 = _split_degenerate(p1, p2, s, mask, csi, budget)
            keep = (q1, q2)
            if residual_ok(q1, q2):
                return q1, q2, False
        tau *= 10.0
    p1, p2 = keep
    return p1, p2, True


def _split_degenerate(p1, p2, s, mask, csi, budget):
    """Proportional split of the pinned aggregate loads on tied subcarriers.

    Tied subcarriers share (up to the tie threshold) one price ratio, so the
    one-parameter family p1n = theta*s_n/g1n, p2n = (1-theta)*s_n/g2n spans
    all budget splits; theta is found by bisection on the node-1 sum.
    """
    q1 = np.array(p1, dtype=float)
    q2 = np.array(p2, dtype=float)
    free1 = s[mask] / csi.g1[mask]
    free2 = s[mask] / csi.g2[mask]
    b1 = budget.p1 - float(np.sum(q1[~mask]))
    target = min(max(b1, 0.0), float(np.sum(free1)))
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid * float(np.sum(free1)) < target:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    q1[mask] = theta * free1
    q2[mask] = (1.0 - theta) * free2
    return q1, q2


def solve_ma(t: float, rho: float, csi: ChannelState, budget: PowerBudget,
             config: SolverConfig | None = None, trace=None) -> MaSolution:
    """Maximize the MA-phase rate at fixed t via the structured dual search."""
    _check_t(t)
    if rho <= 0:
        raise ValueError("rho must be positive")
    config = config or SolverConfig()

    branch = lambda_branch_test(t, rho, csi, budget, config)
    if branch is Branch.AT_LAMBDA0:
        lam = (0.0, 0.0, 1.0)
        alpha, (p1, p2), dval, gap_bound = ellipsoid_inner_solve(
            lam, t, rho, csi, budget, config)
    else:
        lo, hi = 0.0, 1.0
        while hi - lo > config.eps_bisect:
            lam3 = 0.5 * (lo + hi)
            lam = _lam_on_branch(branch, lam3)
            alpha, (p1, p2), dval, gap_bound = ellipsoid_inner_solve(
                lam, t, rho, csi, budget, config)
            r1, r2, r3 = _kernels.ma_rate_terms(p1, p2, t, rho, csi.g1, csi.g2)
            zeta = (r1 - r3) if branch is Branch.LAMBDA1 else (r2 - r3)
            if trace is not None:
                trace.write(json.dumps({"lam3": lam3, "zeta": zeta,
                                        "alpha": list(alpha)}) + "\n")
            if zeta < 0.0:
                hi = lam3
            else:
                lo = lam3
        lam = _lam_on_branch(branch, 0.5 * (lo + hi))
        alpha, (p1, p2), dval, gap_bound = ellipsoid_inner_solve(
            lam, t, rho, csi, budget, config)

    dual = MaDualPoint(lam, alpha)
    p1, p2, warning = recover_primal(dual, t, rho, csi, budget, config, p1, p2)
    p1 = _repair_budget(p1, budget.p1)
    p2 = _repair_budget(p2, budget.p2)
    r1, r2, r3 = _kernels.ma_rate_terms(p1, p2, t, rho, csi.g1, csi.g2)
    rate = float(min(r1, r2, r3))
    gap = abs(-dval - rate)
    return MaSolution(rate=rate, p1=p1, p2=p2, dual=dual, gap=gap,
                      recovery_warning=warning)


def _repair_budget(p: np.ndarray, limit: float) -> np.ndarray:
    """Exact-budget polish: all MA rates increase in every power, so spending
    the full budget is always optimal; scaling also removes any tolerance-level
    overshoot left by the dual solve."""
    total = float(np.sum(p))
    if total <= 1e-12 * limit:
        return p
    return p * (limit / total)
