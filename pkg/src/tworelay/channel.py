"""Channel state generation, scaling, and persistence.

Per-subcarrier power gains are kept in normalized form: the uplink gain of
node i on subcarrier n already folds in the relay noise variance, and the
downlink gain folds in the terminal noise variance, so rate formulas never
see noise powers explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


def _as_gain_vector(values, n: int, name: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (n,):
        raise ValueError(f"{name} must have length {n}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    if np.any(v < 0):
        raise ValueError(f"{name} must be nonnegative")
    if not np.any(v > 0):
        raise ValueError(f"{name} must have at least one positive entry")
    return v


@dataclass(frozen=True)
class ChannelState:
    """Normalized power gains of the four links for N subcarriers.

    g1, g2  : uplink gains terminal->relay
    gt1, gt2: downlink gains relay->terminal
    """

    n_subcarriers: int
    g1: np.ndarray
    g2: np.ndarray
    gt1: np.ndarray
    gt2: np.ndarray

    def __post_init__(self):
        n = self.n_subcarriers
        if n < 1:
            raise ValueError("n_subcarriers must be positive")
        for name in ("g1", "g2", "gt1", "gt2"):
            object.__setattr__(self, name, _as_gain_vector(getattr(self, name), n, name))

    def to_json(self) -> str:
        obj = {
            "n": self.n_subcarriers,
            "g1": list(self.g1),
            "g2": list(self.g2),
            "gt1": list(self.gt1),
            "gt2": list(self.gt2),
        }
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "ChannelState":
        obj = json.loads(text)
        return cls(obj["n"], obj["g1"], obj["g2"], obj["gt1"], obj["gt2"])

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ChannelState":
        with open(path) as fh:
            return cls.from_json(fh.read())


@dataclass(frozen=True)
class PowerBudget:
    """Maximum average transmission powers of the two terminals and the relay."""

    p1: float
    p2: float
    pr: float

    def __post_init__(self):
        for name in ("p1", "p2", "pr"):
            v = float(getattr(self, name))
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class SnrScale:
    """A nominal budget together with a positive power scale factor x."""

    base: PowerBudget
    x: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and self.x > 0):
            raise ValueError("x must be positive")


def scale_budget(scale: SnrScale) -> PowerBudget:
    """Scale every nominal power by x."""
    b = scale.base
    return PowerBudget(scale.x * b.p1, scale.x * b.p2, scale.x * b.pr)


def generate_rayleigh_csi(
    n_subcarriers: int,
    n_taps: int = 4,
    reciprocal: bool = True,
    seed: int = 0,
) -> ChannelState:
    """Draw a frequency-selective Rayleigh channel as DFT of i.i.d. taps.

    Each link gets n_taps circularly-symmetric complex Gaussian taps with
    per-tap variance 1/n_taps (uniform power profile, so the expected gain
    per subcarrier is exactly 1); the per-subcarrier gain is the squared
    magnitude of the length-N DFT. The generator is numpy's PCG64, seeded,
    so channel files are reproducible.
    """
    if n_subcarriers < 1 or n_taps < 1:
        raise ValueError("n_subcarriers and n_taps must be positive")
    if n_taps > n_subcarriers:
        raise ValueError("n_taps must not exceed n_subcarriers")
    rng = np.random.default_rng(seed)
    n_links = 2 if reciprocal else 4

    def draw_link() -> np.ndarray:
        taps = (rng.standard_normal(n_taps) + 1j * rng.standard_normal(n_taps))
        taps *= np.sqrt(1.0 / (2.0 * n_taps))
        h = np.fft.fft(taps, n=n_subcarriers)
        return np.abs(h) ** 2

    gains = [draw_link() for _ in range(n_links)]
    if reciprocal:
        g1, g2 = gains
        gt1, gt2 = g1.copy(), g2.copy()
    else:
        g1, g2, gt1, gt2 = gains
    return ChannelState(n_subcarriers, g1, g2, gt1, gt2)


def average_snr(csi: ChannelState, budget: PowerBudget) -> tuple[float, float]:
    """Average uplink SNR of each terminal: mean gain times per-subcarrier power."""
    n = csi.n_subcarriers
    return (float(np.mean(csi.g1)) * budget.p1 / n,
            float(np.mean(csi.g2)) * budget.p2 / n)
