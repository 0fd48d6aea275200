import math

import numpy as np
import pytest

from wepsim import (
    DiscreteMeasure,
    GaussianFieldDraw,
    WeightSeq,
    WeightedSample,
    bridge_sup_norm,
    derive_rng,
    gn_signed_measure,
    gn_sup_norm,
    multiplier_abs_sum,
    sample_bridge,
    tv_distance,
)

from conftest import brute_force_subset_sup

HALF_HALF = DiscreteMeasure.from_pairs({0: 0.5, 1: 0.5}, is_probability=True)


def _sample(weights, atoms, baseline) -> WeightedSample:
    return WeightedSample(WeightSeq(np.asarray(weights, float)), np.asarray(atoms), baseline)


# ---------------------------------------------------------------------------
# centered weighted sums as signed measures
# ---------------------------------------------------------------------------
def test_gn_single_observation():
    s = _sample([1.0], [0], HALF_HALF)
    mu = gn_signed_measure(s)
    assert mu.mass_at(0) == pytest.approx(0.5, abs=1e-15)
    assert mu.mass_at(1) == pytest.approx(-0.5, abs=1e-15)
    assert gn_sup_norm(s) == pytest.approx(0.5, abs=1e-15)


def test_gn_zero_weights_gives_zero_measure():
    s = _sample([0.0, 0.0], [0, 1], HALF_HALF)
    assert gn_signed_measure(s).support_size == 0
    assert gn_sup_norm(s) == 0.0


def test_gn_degenerate_baseline_cancels():
    s = _sample([0.3, 0.7], [0, 0], DiscreteMeasure.point_mass(0))
    assert gn_signed_measure(s).support_size == 0


def test_gn_probability_weights_equal_tv():
    rng = np.random.default_rng(41)
    for _ in range(50):
        n = int(rng.integers(1, 30))
        atoms = rng.integers(0, 2, size=n)
        s = _sample(np.full(n, 1.0 / n), atoms, HALF_HALF)
        emp = DiscreteMeasure.empirical(atoms)
        assert gn_sup_norm(s) == pytest.approx(tv_distance(emp, HALF_HALF), abs=1e-12)


def test_gn_scales_linearly():
    rng = np.random.default_rng(42)
    w = rng.random(10)
    atoms = rng.integers(0, 2, size=10)
    single = gn_sup_norm(_sample(w, atoms, HALF_HALF))
    doubled = gn_sup_norm(_sample(2.0 * w, atoms, HALF_HALF))
    assert doubled == pytest.approx(2.0 * single, rel=1e-12)


def test_gn_recovers_empirical_process(geometric_half):
    # rescaled flat weights turn the process into sqrt(n) (emp - baseline),
    # checked against an independent dictionary two-pass computation
    rng = derive_rng(51, 0)
    n = 500
    cum = geometric_half.cumulative()
    atoms = geometric_half.ids[np.searchsorted(cum, rng.random(n) * cum[-1], side="right")]
    s = _sample(np.full(n, n**-0.5), atoms, geometric_half)
    counts: dict[int, int] = {}
    for a in atoms:
        counts[int(a)] = counts.get(int(a), 0) + 1
    diffs = {}
    for i, m in zip(geometric_half.ids, geometric_half.masses):
        diffs[int(i)] = counts.get(int(i), 0) / n - float(m)
    for a, c in counts.items():
        if a not in diffs:
            diffs[a] = c / n
    pos = sum(v for v in diffs.values() if v > 0)
    neg = sum(v for v in diffs.values() if v < 0)
    oracle = math.sqrt(n) * max(pos, -neg)
    assert gn_sup_norm(s) == pytest.approx(oracle, abs=1e-10)


def test_gn_total_mass_bounded_by_baseline_deficit(geometric_half):
    rng = np.random.default_rng(43)
    w = rng.random(40)
    atoms = rng.integers(0, 20, size=40)
    mu = gn_signed_measure(_sample(w, atoms, geometric_half))
    deficit = abs(1.0 - geometric_half.total_mass())
    assert abs(mu.total_mass()) <= deficit * w.sum() + 1e-12


def test_gn_handles_atoms_outside_baseline_support():
    s = _sample([0.5], [999], HALF_HALF)
    mu = gn_signed_measure(s)
    assert mu.mass_at(999) == pytest.approx(0.5, abs=1e-15)
    assert mu.mass_at(0) == pytest.approx(-0.25, abs=1e-15)
    assert gn_sup_norm(s) == pytest.approx(0.5, abs=1e-15)


def test_gn_envelope_threshold():
    s = _sample([1.0], [0], HALF_HALF)
    assert gn_signed_measure(s, envelope_threshold=0.5).support_size == 0
    full = gn_signed_measure(s, envelope_threshold=1.0)
    assert full.support_size == 2


# ---------------------------------------------------------------------------
# bridge draws
# ---------------------------------------------------------------------------
def test_bridge_increments_sum_to_zero(geometric_half):
    for seed in range(100):
        d = sample_bridge(geometric_half, derive_rng(52, seed))
        assert abs(float(d.values.sum())) < 1e-10


def test_bridge_sup_norm_examples():
    zero = GaussianFieldDraw(np.array([0, 1]), np.array([0.0, 0.0]))
    assert bridge_sup_norm(zero) == 0.0
    d = GaussianFieldDraw(np.array([0, 1, 2]), np.array([0.4, -0.1, -0.3]))
    assert bridge_sup_norm(d) == pytest.approx(0.4, abs=1e-15)


def test_bridge_sup_norm_matches_enumeration():
    rng = np.random.default_rng(44)
    for _ in range(80):
        k = int(rng.integers(1, 12))
        vals = rng.normal(size=k)
        d = GaussianFieldDraw(np.arange(k), vals)
        m = DiscreteMeasure(np.arange(k)[vals != 0], vals[vals != 0])
        assert bridge_sup_norm(d) == pytest.approx(brute_force_subset_sup(m), abs=1e-12)


def test_bridge_two_atom_distribution():
    # on a fair two-atom base, Z_0 = -Z_1 ~ N(0, 1/4) and the sup-norm is
    # |Z_0|, whose mean is sqrt(2/pi)/2
    reps = 20000
    sups = np.empty(reps)
    for r in range(reps):
        d = sample_bridge(HALF_HALF, derive_rng(53, r))
        assert d.values[0] == pytest.approx(-d.values[1], abs=1e-12)
        sups[r] = bridge_sup_norm(d)
    se = sups.std(ddof=1) / math.sqrt(reps)
    assert abs(sups.mean() - 0.5 * math.sqrt(2.0 / math.pi)) <= 3.0 * se


def test_bridge_covariance_small_case():
    p = DiscreteMeasure.from_pairs({0: 0.6, 1: 0.3, 2: 0.1}, is_probability=True)
    reps = 30000
    draws = np.empty((reps, 3))
    for r in range(reps):
        draws[r] = sample_bridge(p, derive_rng(54, r)).values
    cov = np.cov(draws.T)
    masses = p.masses
    target = np.diag(masses) - np.outer(masses, masses)
    assert np.abs(cov - target).max() < 0.01


def test_bridge_requires_probability():
    sub = DiscreteMeasure(np.array([0]), np.array([0.5]))
    with pytest.raises(ValueError):
        sample_bridge(sub, derive_rng(55, 0))


# ---------------------------------------------------------------------------
# normal-multiplier statistic
# ---------------------------------------------------------------------------
def test_multiplier_single_group_half_normal_mean():
    reps = 20000
    vals = np.array(
        [multiplier_abs_sum(np.zeros(16, np.int64), derive_rng(56, r)) for r in range(reps)]
    )
    se = vals.std(ddof=1) / math.sqrt(reps)
    assert abs(vals.mean() - math.sqrt(2.0 / math.pi)) <= 3.0 * se


def test_multiplier_group_decomposition():
    # counts (8, 4, 4) over n = 16: mean is sqrt(2/pi) * sum sqrt(n_y / n)
    sample = np.array([0] * 8 + [1] * 4 + [2] * 4)
    reps = 20000
    vals = np.array([multiplier_abs_sum(sample, derive_rng(57, r)) for r in range(reps)])
    target = math.sqrt(2.0 / math.pi) * (
        math.sqrt(8 / 16) + math.sqrt(4 / 16) + math.sqrt(4 / 16)
    )
    se = vals.std(ddof=1) / math.sqrt(reps)
    assert abs(vals.mean() - target) <= 3.0 * se


def test_multiplier_rejects_empty_sample():
    with pytest.raises(ValueError):
        multiplier_abs_sum(np.empty(0, np.int64), derive_rng(58, 0))
