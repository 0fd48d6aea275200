"""Numba and numpy kernel flavours must agree bit for bit."""
import hashlib
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from wepsim import kernels
from wepsim.backend import DISABLE_ENV, USE_NUMBA

pytestmark = pytest.mark.skipif(
    not USE_NUMBA, reason="numba backend unavailable; nothing to compare"
)


def _both(name):
    impl = kernels.implementations()
    return impl["numba"][name], impl["numpy"][name]


def test_stick_scan_twins_agree():
    nb, np_ = _both("stick_scan")
    rng = np.random.default_rng(81)
    for conc, tol in ((1.0, 1e-10), (500.0, 1e-10), (5001.0, 1e-8)):
        q = rng.random(4096) ** (1.0 / conc)
        w1, s1, stop1 = nb(q, 1.0, tol)
        w2, s2, stop2 = np_(q, 1.0, tol)
        assert stop1 == stop2
        assert s1 == s2
        assert np.array_equal(np.asarray(w1), np.asarray(w2))


def test_weighted_accumulate_twins_agree():
    nb, np_ = _both("weighted_accumulate")
    rng = np.random.default_rng(82)
    masses = rng.dirichlet(np.ones(40))
    cum = np.cumsum(masses)
    x = rng.random(20000) * cum[-1]
    w = rng.random(20000)
    assert np.array_equal(nb(cum, x, w, 40), np_(cum, x, w, 40))


def test_ks_twins_agree():
    nb, np_ = _both("ks_statistic")
    rng = np.random.default_rng(83)
    for _ in range(20):
        a = np.sort(rng.normal(size=rng.integers(1, 500)))
        b = np.sort(rng.normal(size=rng.integers(1, 500)))
        assert nb(a, b) == np_(a, b)
    # ties across and within samples
    a = np.array([0.0, 0.0, 1.0, 2.0])
    b = np.array([0.0, 1.0, 1.0])
    assert nb(a, b) == np_(a, b)


def test_window_counts_twins_agree():
    nb, np_ = _both("window_counts")
    rng = np.random.default_rng(84)
    grid = np.array([-0.5, 0.0, 0.5, 1.0])
    for _ in range(20):
        u = rng.normal(size=3000) * 2.0
        assert np.array_equal(nb(u, -1.0, grid), np_(u, -1.0, grid))


def test_min_cover_twins_agree():
    nb, np_ = _both("min_cover_size")
    rng = np.random.default_rng(85)
    for _ in range(30):
        nmask = int(rng.integers(2, 12))
        masks = rng.integers(1, 1 << 16, size=nmask).astype(np.int64)
        masks[0] |= 0x8000  # keep the target reachable
        full = int(np.bitwise_or.reduce(masks))
        assert nb(masks, full) == np_(masks, full)


def _run_digest(env_extra: dict) -> str:
    code = """
import hashlib
import numpy as np
import wepsim

rng = wepsim.derive_rng(12345, 0)
params = wepsim.DpParams(wepsim.GeometricFamily(0.5).truncate(), 5001.0)
d = wepsim.sample_dp(params, 1e-10, rng)
h = hashlib.sha256()
h.update(d.ids.tobytes())
h.update(d.masses.tobytes())
w = wepsim.sample_stick_weights(3.0, 1e-12, wepsim.derive_rng(12345, 1))
h.update(w.weights.tobytes())
a = np.sort(wepsim.derive_rng(1, 2).normal(size=500))
b = np.sort(wepsim.derive_rng(1, 3).normal(size=400))
h.update(repr(wepsim.ks_distance(a, b)).encode())
print(wepsim.active_backend(), h.hexdigest())
"""
    env = dict(os.environ)
    env.update(env_extra)
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    return out.stdout.strip()


def test_end_to_end_draws_identical_across_backends():
    with_numba = _run_digest({})
    without = _run_digest({DISABLE_ENV: "1"})
    assert with_numba.split()[0] == "numba"
    assert without.split()[0] == "numpy"
    assert with_numba.split()[1] == without.split()[1]


def test_cli_output_identical_across_backends(tmp_path):
    cfg = {
        "master_seed": 31415,
        "n_schedule": [30, 90],
        "replications": 12,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    digests = []
    for env_extra, expect in (({}, "numba"), ({DISABLE_ENV: "1"}, "numpy")):
        out_path = tmp_path / f"gc_{expect}.csv"
        env = dict(os.environ)
        env.update(env_extra)
        res = subprocess.run(
            [
                sys.executable,
                "-m",
                "wepsim.cli",
                "gc",
                "--config",
                str(cfg_path),
                "--out",
                str(out_path),
            ],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        assert f"backend: {expect}" in res.stdout
        digests.append(hashlib.sha256(out_path.read_bytes()).hexdigest())
    assert digests[0] == digests[1]
