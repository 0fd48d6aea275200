"""Timing comparison of the numba and numpy kernel flavours.

Runs each hot kernel at experiment scale with both implementations and
prints a table of per-call times.  Usage:

    python benchmarks/bench_backends.py [--repeat N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from wepsim import DpParams, GeometricFamily, derive_rng, sample_dp
from wepsim.backend import HAVE_NUMBA, active_backend
from wepsim.kernels import implementations


def _time(fn, *args, repeat: int, warmup: int = 1) -> float:
    for _ in range(warmup):
        fn(*args)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def _cases(rng: np.random.Generator) -> dict:
    conc = 5001.0
    q = rng.random(1 << 17) ** (1.0 / conc)
    masses = GeometricFamily(0.5).truncate().masses
    cum = np.cumsum(masses)
    x = rng.random(120_000) * cum[-1]
    w = rng.random(120_000)
    a = np.sort(rng.normal(size=2000))
    b = np.sort(rng.normal(size=2000))
    u = rng.normal(size=40_000) * 20.0
    grid = np.linspace(-0.6, 1.0, 5)
    cover_masks = rng.integers(1, 1 << 16, size=40).astype(np.int64)
    cover_masks[0] = (1 << 16) - 1  # keep the cover feasible
    return {
        "stick_scan(128k sticks)": (q, 1.0, 1e-10),
        "weighted_accumulate(120k)": (cum, x, w, cum.size),
        "ks_statistic(2k vs 2k)": (a, b),
        "window_counts(40k)": (u, -1.0, grid),
        "min_cover_size(16 elems)": (cover_masks, (1 << 16) - 1),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    print(f"active backend: {active_backend()}")
    impls = implementations()
    if not HAVE_NUMBA:
        print("numba unavailable: timing the numpy flavour only")
    cases = _cases(np.random.default_rng(2026))
    names = sorted(impls)
    header = f"{'kernel':<28}" + "".join(f"{n + ' (ms)':>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for case, case_args in cases.items():
        times = {}
        for name in names:
            fn = impls[name][case.split("(")[0]]
            times[name] = _time(fn, *case_args, repeat=args.repeat)
        row = f"{case:<28}" + "".join(f"{times[n] * 1e3:>14.3f}" for n in names)
        if len(names) == 2:
            row += f"{times['numpy'] / times['numba']:>9.2f}x"
        print(row)

    # one end-to-end posterior draw at fluctuation-experiment scale; the
    # backend here is whichever is active for the process
    params = DpParams(GeometricFamily(0.5).truncate(), 5001.0)
    t = _time(lambda: sample_dp(params, 1e-10, derive_rng(7, 0)), repeat=max(args.repeat // 4, 3))
    print(f"\nsample_dp at concentration 5001 ({active_backend()}): {t * 1e3:.1f} ms/draw")


if __name__ == "__main__":
    main()
