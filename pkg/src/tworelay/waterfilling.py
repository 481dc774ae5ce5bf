"""Single-user water-filling over parallel channels, exact breakpoint method."""

from __future__ import annotations

import numpy as np


def waterfill_level(gains, budget: float, t_scale: float) -> float:
    """Water level mu with sum max(0, mu - t/g) = budget; inf if no positive gain."""
    g = np.asarray(gains, dtype=float)
    pos = g > 0
    if budget <= 0.0 or not np.any(pos):
        return np.inf if budget > 0.0 else 0.0
    base = np.sort(t_scale / g[pos])
    csum = np.cumsum(base)
    k_active = 1
    for k in range(1, len(base) + 1):
        mu = (budget + csum[k - 1]) / k
        if mu > base[k - 1]:
            k_active = k
    return (budget + csum[k_active - 1]) / k_active


def waterfill(gains, budget: float, t_scale: float) -> np.ndarray:
    """Maximize sum t*log2(1 + g p / t) under sum p <= budget.

    p_n = max(0, mu - t/g_n); the budget is met with equality whenever it is
    positive and some gain is positive.
    """
    g = np.asarray(gains, dtype=float)
    p = np.zeros_like(g)
    mu = waterfill_level(g, budget, t_scale)
    if not np.isfinite(mu) or mu <= 0.0:
        return p
    pos = g > 0
    p[pos] = np.maximum(0.0, mu - t_scale / g[pos])
    return p
