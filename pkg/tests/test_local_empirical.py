import math

import numpy as np
import pytest
from scipy.stats import norm

from wepsim import (
    LocalConfig,
    NormalDensity,
    UniformDensity,
    derive_rng,
    drift_statistic,
    simulate_t_process,
    window_probability,
)
from wepsim.local_empirical import grid_window_probabilities


def test_window_probability_uniform_rectangle():
    cfg = LocalConfig(
        center=0.0,
        bandwidth=0.1,
        s_lo=-1.0,
        s_hi=1.0,
        density=UniformDensity(-10.0, 10.0),
        t_grid=(1.0,),
    )
    assert window_probability(cfg) == pytest.approx(0.01, abs=1e-12)


def test_window_probability_matches_normal_cdf():
    cfg = LocalConfig(bandwidth=0.3, t_grid=(0.2, 1.0))
    exact = norm.cdf(0.3 * 0.2) - norm.cdf(-0.3)
    assert window_probability(cfg, 0.2) == pytest.approx(exact, abs=1e-10)


def test_window_probability_density_ratio_limit():
    # a / (h * window length * density(center)) -> 1 as h -> 0
    for h, tol in ((0.1, 2e-3), (0.01, 2e-5)):
        cfg = LocalConfig(bandwidth=h)
        ratio = window_probability(cfg) / (h * 2.0 * NormalDensity().pdf(0.0))
        assert abs(ratio - 1.0) < tol


def test_window_probability_degenerate_window():
    cfg = LocalConfig(bandwidth=0.1)
    assert window_probability(cfg, cfg.s_lo) == 0.0
    with pytest.raises(ValueError):
        window_probability(cfg, -2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        LocalConfig(bandwidth=0.0)
    with pytest.raises(ValueError):
        LocalConfig(s_lo=1.0, s_hi=-1.0)
    with pytest.raises(ValueError):
        LocalConfig(t_grid=(0.5, 0.2))
    with pytest.raises(ValueError):
        LocalConfig(t_grid=(2.0,))
    with pytest.raises(ValueError):
        LocalConfig(t_grid=())


def test_simulated_counts_are_nested():
    cfg = LocalConfig(bandwidth=0.2)
    probs = grid_window_probabilities(cfg)
    n = 4000
    for seed in range(20):
        draw = simulate_t_process(cfg, n, derive_rng(61, seed), probs)
        counts = draw.t_values * math.sqrt(n * cfg.bandwidth) + n * probs
        assert np.all(np.diff(counts) >= -1e-9)
        assert draw.count_in_window >= 0
        assert 0.0 <= draw.a_hat <= 1.0


def test_zero_mass_window_is_pure_zero():
    cfg = LocalConfig(
        density=UniformDensity(5.0, 6.0), bandwidth=0.1, t_grid=(0.0, 1.0)
    )
    draw = simulate_t_process(cfg, 100, derive_rng(62, 0))
    assert np.all(draw.t_values == 0.0)
    assert draw.count_in_window == 0


def test_t_values_match_direct_recomputation():
    cfg = LocalConfig(bandwidth=0.25, t_grid=(-0.5, 0.0, 0.75))
    probs = grid_window_probabilities(cfg)
    n = 200
    rng = derive_rng(63, 0)
    draw = simulate_t_process(cfg, n, rng, probs)
    rng2 = derive_rng(63, 0)
    z = cfg.density.sample(rng2, n)
    u = (z - cfg.center) / cfg.bandwidth
    for ti, t in enumerate(cfg.t_grid):
        count = int(np.count_nonzero((u >= cfg.s_lo) & (u <= t)))
        expected = (count - n * probs[ti]) / math.sqrt(n * cfg.bandwidth)
        assert draw.t_values[ti] == pytest.approx(expected, abs=1e-12)


def test_window_variance_approaches_density_height():
    # Var T(full window) = a (1 - a) / h -> window length * density(0)
    target = 2.0 * NormalDensity().pdf(0.0)
    errs = []
    for hi, h in enumerate((0.2, 0.05)):
        cfg = LocalConfig(bandwidth=h, t_grid=(1.0,))
        a = window_probability(cfg)
        n = int(round(400 / h))
        reps = 4000
        vals = np.array(
            [
                simulate_t_process(cfg, n, derive_rng(64, hi, r), np.array([a])).t_values[0]
                for r in range(reps)
            ]
        )
        exact = a * (1.0 - a) / h
        assert vals.var(ddof=1) == pytest.approx(exact, rel=0.15)
        errs.append(abs(exact - target))
    assert errs[1] < errs[0]


def test_drift_statistic_moments():
    cfg = LocalConfig(bandwidth=0.1)
    a = window_probability(cfg)
    n = 20000
    reps = 3000
    vals = np.array([drift_statistic(cfg, n, derive_rng(65, r), a) for r in range(reps)])
    se_mean = vals.std(ddof=1) / math.sqrt(reps)
    assert abs(vals.mean()) <= 3.0 * se_mean
    standardized = vals / math.sqrt(a * (1.0 - a) / cfg.bandwidth)
    var = standardized.var(ddof=1)
    # variance of a sample variance of ~normal data is about 2/reps
    assert abs(var - 1.0) <= 4.0 * math.sqrt(2.0 / reps)


def test_drift_degenerates_with_vanishing_window_mass():
    cfg = LocalConfig(density=UniformDensity(5.0, 6.0), bandwidth=0.1)
    assert drift_statistic(cfg, 50, derive_rng(66, 0)) == 0.0
