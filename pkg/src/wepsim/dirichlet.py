"""Stick-breaking Dirichlet process sampling and the conjugate posterior.

A draw from DP(base, M) is built by the stick-breaking construction:
weights beta_i = V_i * prod_{j<i} (1 - V_j) with V_j i.i.d. Beta(1, M) and
atoms i.i.d. from the base measure.  Sticks are generated until the
leftover stick mass drops below a tolerance; the leftover is carried as an
explicit remainder, never renormalized away, so downstream total-variation
numbers can bound the truncation error by the remainder.

Beta(1, M) variables are drawn by inversion, V = 1 - U^(1/M), which is
exact and reproducible across platforms given the same uniform stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .measures import DiscreteMeasure, WeightSeq, mix

#: default leftover-stick-mass tolerance.
DEFAULT_STICK_TOL = 1e-10

_MAX_BLOCK = 1 << 17


@dataclass(frozen=True)
class DpParams:
    """Dirichlet process parameters: mean measure and concentration."""

    base: DiscreteMeasure
    concentration: float

    def __post_init__(self):
        if not self.base.is_probability:
            raise ValueError("base must be a probability measure")
        if not self.concentration > 0.0:
            raise ValueError("concentration must be positive")


@dataclass(frozen=True)
class StickBreakingDraw:
    """Weights and atoms of one stick-breaking draw, plus leftover mass.

    ``sticks`` optionally retains the raw Beta variables V_i so the weight
    recursion can be replayed in debug checks.
    """

    weights: WeightSeq
    atoms: np.ndarray
    remainder: float
    sticks: np.ndarray | None = None

    def __post_init__(self):
        atoms = np.ascontiguousarray(self.atoms, dtype=np.int64)
        if atoms.shape != self.weights.weights.shape:
            raise ValueError("weights and atoms must have equal length")
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)


def _block_size(concentration: float, tol: float) -> int:
    expected = concentration * math.log(1.0 / tol)
    return min(max(int(1.3 * expected) + 16, 64), _MAX_BLOCK)


def _stick_arrays(
    concentration: float, tol: float, rng: np.random.Generator, keep_sticks: bool = False
):
    """Raw (weights, remainder, betas) arrays of one stick-breaking run."""
    block = _block_size(concentration, tol)
    inv = 1.0 / concentration
    parts = []
    vparts = []
    stick = 1.0
    while True:
        # retention factors 1 - V computed with vectorized pow so that both
        # kernel backends fold the exact same block
        q = rng.random(block) ** inv
        w, stick, stop = kernels.stick_scan(q, stick, tol)
        parts.append(w)
        if keep_sticks:
            vparts.append(1.0 - q[: w.size])
        if stop >= 0:
            break
    weights = np.concatenate(parts) if len(parts) > 1 else np.asarray(parts[0])
    betas = None
    if keep_sticks:
        betas = np.concatenate(vparts) if len(vparts) > 1 else np.asarray(vparts[0])
    return weights, stick, betas


def sample_stick_weights(
    concentration: float, tol: float, rng: np.random.Generator
) -> WeightSeq:
    """Stick-breaking weights generated until leftover mass drops below tol.

    The returned sequence satisfies l1() + remainder == 1 up to float
    roundoff, with remainder < tol.
    """
    if not concentration > 0.0:
        raise ValueError("concentration must be positive")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    weights, stick, _ = _stick_arrays(concentration, tol, rng)
    return WeightSeq(weights, remainder=stick)


def sample_dp_draw(
    params: DpParams,
    tol: float,
    rng: np.random.Generator,
    *,
    keep_sticks: bool = False,
) -> StickBreakingDraw:
    """One stick-breaking draw with atoms drawn i.i.d. from the base."""
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    weights, stick, betas = _stick_arrays(params.concentration, tol, rng, keep_sticks)
    cum = params.base.cumulative()
    u = rng.random(weights.size) * cum[-1]
    pos = np.minimum(np.searchsorted(cum, u, side="right"), cum.size - 1)
    atoms = params.base.ids[pos]
    return StickBreakingDraw(WeightSeq(weights, remainder=stick), atoms, stick, betas)


def sample_dp(params: DpParams, tol: float, rng: np.random.Generator) -> DiscreteMeasure:
    """One realization of DP(base, concentration), coinciding atoms merged.

    The result has total mass 1 - remainder; the truncation remainder is NOT
    folded back in, so the output is a sub-probability measure whose deficit
    bounds the truncation error of any event probability.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    weights, stick, _ = _stick_arrays(params.concentration, tol, rng)
    cum = params.base.cumulative()
    u = rng.random(weights.size) * cum[-1]
    acc = kernels.weighted_accumulate(cum, u, weights, cum.size)
    hit = acc > 0.0
    return DiscreteMeasure(params.base.ids[hit], acc[hit])


def posterior_params(prior: DpParams, sample: np.ndarray) -> DpParams:
    """Conjugate update: DP(prior_mix, M + n) given n observed atoms.

    The posterior base mixes the prior base with the empirical measure of
    the sample at weight M / (M + n).
    """
    sample = np.asarray(sample, dtype=np.int64)
    n = sample.size
    if n == 0:
        return prior
    theta = prior.concentration / (prior.concentration + n)
    base = mix(prior.base, DiscreteMeasure.empirical(sample), theta)
    return DpParams(base=base, concentration=prior.concentration + n)


# ---------------------------------------------------------------------------
# beta-moment oracles (closed forms used by tests and condition checks)
# ---------------------------------------------------------------------------
def expected_sq_l2_norm(concentration: float) -> float:
    """E sum beta_i^2 = 1 / (M + 1) for stick weights at concentration M."""
    return 1.0 / (concentration + 1.0)


def expected_pow4_l4_norm(concentration: float) -> float:
    """E sum beta_i^4 = 6 / ((M + 1)(M + 2)(M + 3))."""
    m = concentration
    return 6.0 / ((m + 1.0) * (m + 2.0) * (m + 3.0))


def expected_stick_count(concentration: float, tol: float) -> float:
    """Mean number of sticks until leftover mass < tol, about M * ln(1/tol)."""
    return concentration * math.log(1.0 / tol)
