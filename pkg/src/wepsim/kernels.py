"""Hot numeric kernels, in numba and pure-numpy flavours.

Every kernel has a ``*_np`` implementation and, when numba is available,
a jitted twin.  The module-level names (``stick_scan``, ...) point at the
flavour selected by :mod:`wepsim.backend`.  The two flavours perform the
same floating point operations in the same order, so their outputs are
bit-identical; ``tests/test_backends.py`` pins that property.

Randomness never enters a kernel: callers draw uniform/normal blocks from
a ``numpy.random.Generator`` and pass plain arrays in, which keeps streams
identical across backends.
"""
from __future__ import annotations

import numpy as np

from .backend import USE_NUMBA

if USE_NUMBA:
    from numba import njit


# ---------------------------------------------------------------------------
# stick-breaking scan
# ---------------------------------------------------------------------------
def stick_scan_np(q: np.ndarray, stick_in: float, tol: float):
    """Fold a block of stick retention factors q = 1 - V into weights.

    Returns (weights, stick_out, stop): weights[i] = V_i * prod_{j<i} q_j
    scaled by the incoming stick mass, stick_out the leftover mass, and
    stop the index that first pushed the leftover below tol (-1 if the
    block was exhausted first).  Weights past ``stop`` are trimmed.
    """
    sticks = stick_in * np.cumprod(q)
    w = np.empty_like(q)
    w[0] = (1.0 - q[0]) * stick_in
    w[1:] = (1.0 - q[1:]) * sticks[:-1]
    below = sticks < tol
    if below.any():
        stop = int(np.argmax(below))
        return w[: stop + 1], float(sticks[stop]), stop
    return w, float(sticks[-1]), -1


def _stick_scan_loop(q, stick_in, tol):
    n = q.shape[0]
    w = np.empty(n)
    stick = stick_in
    for i in range(n):
        w[i] = (1.0 - q[i]) * stick
        stick = stick * q[i]
        if stick < tol:
            return w[: i + 1], stick, i
    return w, stick, -1


# ---------------------------------------------------------------------------
# inverse-CDF scatter accumulation
# ---------------------------------------------------------------------------
def weighted_accumulate_np(cum: np.ndarray, x: np.ndarray, w: np.ndarray, size: int) -> np.ndarray:
    """Accumulate w[i] into the cell j with cum[j-1] <= x[i] < cum[j].

    Points at or beyond the last cumulative value land in the last cell.
    """
    idx = np.minimum(np.searchsorted(cum, x, side="right"), size - 1)
    return np.bincount(idx, weights=w, minlength=size).astype(np.float64)


def _weighted_accumulate_loop(cum, x, w, size):
    acc = np.zeros(size)
    n = cum.shape[0]
    for i in range(x.shape[0]):
        v = x[i]
        lo = 0
        hi = n
        while lo < hi:
            mid = (lo + hi) >> 1
            if v < cum[mid]:
                hi = mid
            else:
                lo = mid + 1
        if lo >= size:
            lo = size - 1
        acc[lo] += w[i]
    return acc


# ---------------------------------------------------------------------------
# two-sample Kolmogorov-Smirnov statistic
# ---------------------------------------------------------------------------
def ks_statistic_np(a: np.ndarray, b: np.ndarray) -> float:
    """sup over pooled points of |F_a - F_b| for sorted samples a, b."""
    pool = np.concatenate((a, b))
    fa = np.searchsorted(a, pool, side="right") / a.shape[0]
    fb = np.searchsorted(b, pool, side="right") / b.shape[0]
    return float(np.abs(fa - fb).max())


def _ks_statistic_loop(a, b):
    na = a.shape[0]
    nb = b.shape[0]
    i = 0
    j = 0
    best = 0.0
    while i < na or j < nb:
        if j >= nb or (i < na and a[i] <= b[j]):
            v = a[i]
        else:
            v = b[j]
        while i < na and a[i] == v:
            i += 1
        while j < nb and b[j] == v:
            j += 1
        d = abs(i / na - j / nb)
        if d > best:
            best = d
    return best


# ---------------------------------------------------------------------------
# nested window counts for the local process
# ---------------------------------------------------------------------------
def window_counts_np(u: np.ndarray, s_lo: float, t_grid: np.ndarray) -> np.ndarray:
    """Counts of u in [s_lo, t] for each t in the ascending grid."""
    inside = (u >= s_lo) & (u <= t_grid[-1])
    idx = np.searchsorted(t_grid, u[inside], side="left")
    hist = np.bincount(idx, minlength=t_grid.shape[0])
    return np.cumsum(hist[: t_grid.shape[0]]).astype(np.int64)


def _window_counts_loop(u, s_lo, t_grid):
    m = t_grid.shape[0]
    hist = np.zeros(m, np.int64)
    hi_edge = t_grid[m - 1]
    for i in range(u.shape[0]):
        v = u[i]
        if v < s_lo or v > hi_edge:
            continue
        j = 0
        while t_grid[j] < v:  # grids are short; linear scan beats bisection
            j += 1
        hist[j] += 1
    out = np.empty(m, np.int64)
    s = 0
    for j in range(m):
        s += hist[j]
        out[j] = s
    return out


# ---------------------------------------------------------------------------
# exact minimal set cover (bracket counting oracle)
# ---------------------------------------------------------------------------
def min_cover_size_np(cov_masks: np.ndarray, full_mask: int) -> int:
    """Minimal number of masks whose union is full_mask, by BFS over unions."""
    seen = np.zeros(full_mask + 1, bool)
    seen[0] = True
    frontier = np.zeros(1, np.int64)
    depth = 0
    while frontier.size:
        depth += 1
        nxt = np.unique(frontier[:, None] | cov_masks[None, :])
        nxt = nxt[~seen[nxt]]
        if nxt.size and nxt[-1] == full_mask:
            return depth
        seen[nxt] = True
        frontier = nxt
    return -1


def _min_cover_size_loop(cov_masks, full_mask):
    nstates = full_mask + 1
    dist = np.full(nstates, -1, np.int8)
    dist[0] = 0
    frontier = np.empty(nstates, np.int64)
    frontier[0] = 0
    fn = 1
    depth = 0
    while fn > 0:
        depth += 1
        nxt = np.empty(nstates, np.int64)
        nn = 0
        for fi in range(fn):
            m = frontier[fi]
            for k in range(cov_masks.shape[0]):
                m2 = m | cov_masks[k]
                if dist[m2] < 0:
                    if m2 == full_mask:
                        return depth
                    dist[m2] = depth
                    nxt[nn] = m2
                    nn += 1
        frontier = nxt[:nn].copy()
        fn = nn
    return -1


if USE_NUMBA:
    stick_scan_nb = njit(cache=True)(_stick_scan_loop)
    weighted_accumulate_nb = njit(cache=True)(_weighted_accumulate_loop)
    ks_statistic_nb = njit(cache=True)(_ks_statistic_loop)
    window_counts_nb = njit(cache=True)(_window_counts_loop)
    min_cover_size_nb = njit(cache=True)(_min_cover_size_loop)

    stick_scan = stick_scan_nb
    weighted_accumulate = weighted_accumulate_nb
    ks_statistic = ks_statistic_nb
    window_counts = window_counts_nb
    min_cover_size = min_cover_size_nb
else:
    stick_scan = stick_scan_np
    weighted_accumulate = weighted_accumulate_np
    ks_statistic = ks_statistic_np
    window_counts = window_counts_np
    min_cover_size = min_cover_size_np


def implementations() -> dict:
    """Both kernel flavours keyed by backend name, for tests and benchmarks."""
    table = {
        "numpy": {
            "stick_scan": stick_scan_np,
            "weighted_accumulate": weighted_accumulate_np,
            "ks_statistic": ks_statistic_np,
            "window_counts": window_counts_np,
            "min_cover_size": min_cover_size_np,
        }
    }
    if USE_NUMBA:
        table["numba"] = {
            "stick_scan": stick_scan_nb,
            "weighted_accumulate": weighted_accumulate_nb,
            "ks_statistic": ks_statistic_nb,
            "window_counts": window_counts_nb,
            "min_cover_size": min_cover_size_nb,
        }
    return table
