"""Weighted empirical processes over indicator classes and Gaussian limits.

A weighted sample pairs non-negative weights with atoms and a baseline
law.  Evaluated over all indicator sets, the centered process is itself a
finitely supported signed measure (weight mass at the atoms minus total
weight times the baseline), so its sup-norm over the class is the signed
sup-norm of that measure.

The Gaussian limit on a discrete probability p assigns independent
N(0, p_y) increments recentered to sum to zero; increment covariance is
p_y d_{yy'} - p_y p_{y'} and the sup-norm over indicator sets reduces to
half the absolute increment sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import DiscreteMeasure, WeightSeq, _compress, align_supports

#: indicator classes have unit envelope; thresholds below this zero the class.
_INDICATOR_ENVELOPE = 1.0


@dataclass(frozen=True)
class WeightedSample:
    """Weights, matching atoms, and the baseline law they are centered by."""

    weights: WeightSeq
    atoms: np.ndarray
    baseline: DiscreteMeasure

    def __post_init__(self):
        atoms = np.ascontiguousarray(self.atoms, dtype=np.int64)
        if atoms.shape != self.weights.weights.shape:
            raise ValueError("weights and atoms must have equal length")
        if not self.baseline.is_probability:
            raise ValueError("baseline must be a probability measure")
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)


@dataclass(frozen=True)
class GaussianFieldDraw:
    """Bridge increments on singletons; ids sorted, values sum to ~0."""

    ids: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ids = np.ascontiguousarray(self.ids, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if ids.shape != values.shape:
            raise ValueError("ids and values must have equal length")
        ids.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "values", values)


def gn_signed_measure(
    s: WeightedSample, envelope_threshold: float = math.inf
) -> DiscreteMeasure:
    """The process as a signed measure: sum_i w_i d_{atom_i} - |w|_1 * baseline.

    ``envelope_threshold`` truncates the function class at a fixed envelope
    height; indicators have envelope 1, so any threshold >= 1 is a no-op and
    a smaller one empties the class.
    """
    if envelope_threshold < _INDICATOR_ENVELOPE:
        return DiscreteMeasure(np.empty(0, np.int64), np.empty(0))
    w = s.weights.weights
    uids, inverse = np.unique(s.atoms, return_inverse=True)
    point_part = np.bincount(inverse, weights=w, minlength=uids.size)
    point = DiscreteMeasure(uids[point_part != 0.0], point_part[point_part != 0.0])
    ids, a, b = align_supports(point, s.baseline)
    return _compress(ids, a - s.weights.l1() * b)


def gn_sup_norm(s: WeightedSample) -> float:
    """Sup over indicator sets of the centered weighted sum."""
    mu = gn_signed_measure(s)
    m = mu.masses
    pos = float(m[m > 0.0].sum())
    neg = float(m[m < 0.0].sum())
    return max(pos, -neg, 0.0)


def sample_bridge(p: DiscreteMeasure, rng: np.random.Generator) -> GaussianFieldDraw:
    """One draw of the bridge increments over a probability measure.

    Independent B_y ~ N(0, p_y) are recentered to Z_y = B_y - p_y * sum B,
    giving Cov(Z_y, Z_{y'}) = p_y d_{yy'} - p_y p_{y'} and sum Z = 0 up to
    the baseline's truncation deficit.
    """
    if not p.is_probability:
        raise ValueError("bridge base must be a probability measure")
    b = rng.standard_normal(p.support_size) * np.sqrt(p.masses)
    z = b - p.masses * b.sum()
    return GaussianFieldDraw(p.ids, z)


def bridge_sup_norm(d: GaussianFieldDraw) -> float:
    """Sup over indicator sets: half absolute sum plus half |total|."""
    return 0.5 * float(np.abs(d.values).sum()) + 0.5 * abs(float(d.values.sum()))


def multiplier_abs_sum(sample: np.ndarray, rng: np.random.Generator) -> float:
    """Absolute sum over atoms of n^(-1/2) times the normal-multiplier sums.

    Draws one standard normal per observation and aggregates by atom.  The
    expectation is sqrt(2/pi) * sum_y sqrt(count_y / n): each atom group sum
    is N(0, count_y / n) and the half-normal mean carries the sqrt(2/pi)
    factor, which any identity equating this expectation to the plain
    square-root mass sum must account for.
    """
    sample = np.asarray(sample, dtype=np.int64)
    n = sample.size
    if n == 0:
        raise ValueError("multiplier statistic of an empty sample")
    xi = rng.standard_normal(n)
    _, inverse = np.unique(sample, return_inverse=True)
    group = np.bincount(inverse, weights=xi)
    return float(np.abs(group / math.sqrt(n)).sum())
