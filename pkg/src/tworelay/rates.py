"""Rate functions and region constraints for a fixed resource allocation.

All rates are in bits per OFDM symbol period per Hz, summed over subcarriers
(no /N normalization; the CLI offers that for plotting). log2(1+x) is always
evaluated through log1p so tiny-power regimes keep full relative accuracy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import ChannelState, PowerBudget

LN2 = float(np.log(2.0))

#: additive tolerance used by region membership tests
MEMBERSHIP_TOL = 1e-9


def log2_1p(x: np.ndarray) -> np.ndarray:
    return np.log1p(x) / LN2


def _as_power_vector(values, n: int, name: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (n,):
        raise ValueError(f"{name} must have length {n}")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise ValueError(f"{name} must be finite and nonnegative")
    return v


@dataclass(frozen=True)
class ResourceAllocation:
    """Per-subcarrier powers of the three nodes plus the MA time proportion t."""

    p1: np.ndarray
    p2: np.ndarray
    pr: np.ndarray
    t: float

    def __post_init__(self):
        n = len(np.atleast_1d(self.p1))
        for name in ("p1", "p2", "pr"):
            object.__setattr__(self, name, _as_power_vector(getattr(self, name), n, name))
        if not (0.0 < self.t < 1.0):
            raise ValueError("t must lie strictly inside (0, 1)")

    @property
    def n_subcarriers(self) -> int:
        return len(self.p1)

    def within_budget(self, budget: PowerBudget, tol: float = 1e-9) -> bool:
        return (self.p1.sum() <= budget.p1 + tol
                and self.p2.sum() <= budget.p2 + tol
                and self.pr.sum() <= budget.pr + tol)

    def to_json(self) -> str:
        return json.dumps({"t": self.t, "p1": list(self.p1),
                           "p2": list(self.p2), "pr": list(self.pr)})

    @classmethod
    def from_json(cls, text: str) -> "ResourceAllocation":
        obj = json.loads(text)
        return cls(obj["p1"], obj["p2"], obj["pr"], obj["t"])


@dataclass(frozen=True)
class RatePair:
    r12: float
    r21: float

    def __post_init__(self):
        for name in ("r12", "r21"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and nonnegative")


@dataclass(frozen=True)
class RegionConstraints:
    """Caps on r12, r21 and (when the strategy has one) on the sum rate."""

    cap12: float
    cap21: float
    cap_sum: Optional[float] = None


def ma_rates(alloc: ResourceAllocation, csi: ChannelState, rho: float) -> tuple[float, float, float]:
    """Multiple-access phase rates (r1, r2, r3) at the given allocation.

    r1 = t * sum log2(1 + g1n p1n / t)
    r2 = (t/rho) * sum log2(1 + g2n p2n / t)
    r3 = (t/(rho+1)) * sum log2(1 + (g1n p1n + g2n p2n) / t)
    """
    t = alloc.t
    r1 = t * float(np.sum(log2_1p(csi.g1 * alloc.p1 / t)))
    r2 = (t / rho) * float(np.sum(log2_1p(csi.g2 * alloc.p2 / t)))
    r3 = (t / (rho + 1.0)) * float(np.sum(log2_1p((csi.g1 * alloc.p1 + csi.g2 * alloc.p2) / t)))
    return r1, r2, r3


def bc_rates(alloc: ResourceAllocation, csi: ChannelState, rho: float) -> tuple[float, float]:
    """Broadcast phase rates (r4, r5).

    r4 = (1-t) * sum log2(1 + gt2n pRn / (1-t))
    r5 = ((1-t)/rho) * sum log2(1 + gt1n pRn / (1-t))
    """
    s = 1.0 - alloc.t
    r4 = s * float(np.sum(log2_1p(csi.gt2 * alloc.pr / s)))
    r5 = (s / rho) * float(np.sum(log2_1p(csi.gt1 * alloc.pr / s)))
    return r4, r5


def df_constraints(alloc: ResourceAllocation, csi: ChannelState) -> RegionConstraints:
    """Multi-subcarrier DF region caps: min over phases of summed rates."""
    t, s = alloc.t, 1.0 - alloc.t
    up1 = t * float(np.sum(log2_1p(csi.g1 * alloc.p1 / t)))
    up2 = t * float(np.sum(log2_1p(csi.g2 * alloc.p2 / t)))
    down1 = s * float(np.sum(log2_1p(csi.gt1 * alloc.pr / s)))
    down2 = s * float(np.sum(log2_1p(csi.gt2 * alloc.pr / s)))
    cap_sum = t * float(np.sum(log2_1p((csi.g1 * alloc.p1 + csi.g2 * alloc.p2) / t)))
    return RegionConstraints(min(up1, down2), min(up2, down1), cap_sum)


def psc_df_constraints(alloc: ResourceAllocation, csi: ChannelState) -> RegionConstraints:
    """Per-subcarrier DF caps: the phase min is taken inside the subcarrier sum."""
    t, s = alloc.t, 1.0 - alloc.t
    up1 = t * log2_1p(csi.g1 * alloc.p1 / t)
    up2 = t * log2_1p(csi.g2 * alloc.p2 / t)
    down1 = s * log2_1p(csi.gt1 * alloc.pr / s)
    down2 = s * log2_1p(csi.gt2 * alloc.pr / s)
    cap12 = float(np.sum(np.minimum(up1, down2)))
    cap21 = float(np.sum(np.minimum(up2, down1)))
    cap_sum = t * float(np.sum(log2_1p((csi.g1 * alloc.p1 + csi.g2 * alloc.p2) / t)))
    return RegionConstraints(cap12, cap21, cap_sum)


def cutset_constraints(alloc: ResourceAllocation, csi: ChannelState) -> RegionConstraints:
    """Cut-set outer bound: DF caps with the sum-rate constraint removed."""
    df = df_constraints(alloc, csi)
    return RegionConstraints(df.cap12, df.cap21, None)


def af_constraints(p1, p2, pr, csi: ChannelState) -> RegionConstraints:
    """Amplify-and-forward caps at fixed half/half time split.

    The relay scales its received signal by a_n = pRn / (p1n g1n + p2n g2n + 1)
    per subcarrier; each direction sees the end-to-end SNR of the two-hop
    amplified link after self-interference cancellation.
    """
    n = csi.n_subcarriers
    p1 = _as_power_vector(p1, n, "p1")
    p2 = _as_power_vector(p2, n, "p2")
    pr = _as_power_vector(pr, n, "pr")
    a = pr / (p1 * csi.g1 + p2 * csi.g2 + 1.0)
    cap12 = 0.5 * float(np.sum(log2_1p(2.0 * p1 * csi.g1 * csi.gt2 * a / (1.0 + csi.gt2 * a))))
    cap21 = 0.5 * float(np.sum(log2_1p(2.0 * p2 * csi.g2 * csi.gt1 * a / (1.0 + csi.gt1 * a))))
    return RegionConstraints(cap12, cap21, None)


def region_contains(constraints: RegionConstraints, rate: RatePair,
                    tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership of a rate pair in the region described by the caps."""
    if rate.r12 > constraints.cap12 + tol:
        return False
    if rate.r21 > constraints.cap21 + tol:
        return False
    if constraints.cap_sum is not None and rate.r12 + rate.r21 > constraints.cap_sum + tol:
        return False
    return True
