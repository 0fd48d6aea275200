"""Desk-scale simulator for the local empirical process in one dimension.

Observations are drawn from a real density, rescaled around a center z by
a bandwidth h, and evaluated on the nested windows [s_lo, t] for t in a
grid inside the window S.  The process value at t is the centered window
count normalized by sqrt(n * h); exact centering probabilities come from
adaptive quadrature of the density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import kernels

_QUAD_ABS_TOL = 1e-10


@dataclass(frozen=True)
class NormalDensity:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if not self.sd > 0.0:
            raise ValueError("sd must be positive")

    def pdf(self, x: float) -> float:
        z = (x - self.mean) / self.sd
        return math.exp(-0.5 * z * z) / (self.sd * math.sqrt(2.0 * math.pi))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.standard_normal(n) * self.sd + self.mean

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class UniformDensity:
    lo: float = -10.0
    hi: float = 10.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("lo must be below hi")

    def pdf(self, x: float) -> float:
        return 1.0 / (self.hi - self.lo) if self.lo <= x <= self.hi else 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.random(n) * (self.hi - self.lo) + self.lo

    def breakpoints(self) -> tuple[float, ...]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class LocalConfig:
    """Center, bandwidth, window, density and window grid of the simulator.

    The grid t values index the nested windows [s_lo, t]; they must lie in
    [s_lo, s_hi] in increasing order.
    """

    center: float = 0.0
    bandwidth: float = 0.1
    s_lo: float = -1.0
    s_hi: float = 1.0
    density: NormalDensity | UniformDensity = field(default_factory=NormalDensity)
    t_grid: tuple[float, ...] = (-0.6, -0.2, 0.2, 0.6, 1.0)

    def __post_init__(self):
        if not self.bandwidth > 0.0:
            raise ValueError("bandwidth must be positive")
        if not self.s_lo < self.s_hi:
            raise ValueError("window must have positive length")
        grid = tuple(float(t) for t in self.t_grid)
        if not grid:
            raise ValueError("t_grid must be non-empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        if grid[0] < self.s_lo or grid[-1] > self.s_hi:
            raise ValueError("t_grid must lie inside the window")
        object.__setattr__(self, "t_grid", grid)

    def window_length(self) -> float:
        return self.s_hi - self.s_lo


@dataclass(frozen=True)
class LocalDraw:
    """Per-grid process values of one replication."""

    t_values: np.ndarray
    a_hat: float
    count_in_window: int


def window_probability(cfg: LocalConfig, upper: float | None = None) -> float:
    """P(h^-1 (Z - center) in [s_lo, upper]) by adaptive quadrature.

    ``upper`` defaults to the full window edge s_hi.
    """
    hi = cfg.s_hi if upper is None else upper
    if hi < cfg.s_lo:
        raise ValueError("upper edge below the window start")
    if hi == cfg.s_lo:
        return 0.0
    a = cfg.center + cfg.bandwidth * cfg.s_lo
    b = cfg.center + cfg.bandwidth * hi
    points = [x for x in cfg.density.breakpoints() if a < x < b] or None
    value, err = quad(cfg.density.pdf, a, b, epsabs=_QUAD_ABS_TOL, limit=200, points=points)
    if err > 1e-8:
        raise ArithmeticError(f"window quadrature failed to converge (err={err:g})")
    return float(value)


def grid_window_probabilities(cfg: LocalConfig) -> np.ndarray:
    """Exact centering probabilities for every grid window [s_lo, t]."""
    return np.array([window_probability(cfg, t) for t in cfg.t_grid])


def simulate_t_process(
    cfg: LocalConfig,
    n: int,
    rng: np.random.Generator,
    window_probs: np.ndarray | None = None,
) -> LocalDraw:
    """One replication of the local process on the grid windows.

    ``window_probs`` allows reusing the quadrature output across many
    replications at the same configuration.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    a = grid_window_probabilities(cfg) if window_probs is None else window_probs
    z = cfg.density.sample(rng, n)
    u = (z - cfg.center) / cfg.bandwidth
    grid = np.asarray(cfg.t_grid)
    counts = kernels.window_counts(u, cfg.s_lo, grid)
    t_values = (counts - n * a) / math.sqrt(n * cfg.bandwidth)
    in_window = int(np.count_nonzero((u >= cfg.s_lo) & (u <= cfg.s_hi)))
    return LocalDraw(t_values=t_values, a_hat=in_window / n, count_in_window=in_window)


def drift_statistic(
    cfg: LocalConfig,
    n: int,
    rng: np.random.Generator,
    a: float | None = None,
) -> float:
    """Centered full-window count over sqrt(n * h).

    Its variance is a(1-a)/h, which approaches window length times density
    height as h shrinks; standardized, it is asymptotically standard normal.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if a is None:
        a = window_probability(cfg)
    z = cfg.density.sample(rng, n)
    u = (z - cfg.center) / cfg.bandwidth
    count = int(np.count_nonzero((u >= cfg.s_lo) & (u <= cfg.s_hi)))
    return (count - n * a) / math.sqrt(n * cfg.bandwidth)
