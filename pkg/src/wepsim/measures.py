"""Exact arithmetic on finitely supported signed measures over integer atoms.

Atoms are non-negative integer ids; any concrete countable space is encoded
by the caller.  Measures are stored sparsely as parallel (ids, masses)
arrays with strictly increasing ids and no exact-zero masses.  All values
are immutable after construction and all operations are pure functions.

Infinite-support laws (geometric, zeta) enter only through explicit
truncation; the truncated tail mass is always reported, never silently
renormalized away.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

import numpy as np
from scipy.special import zeta as _hurwitz_zeta

#: masses with absolute value below this are dropped by measure arithmetic
#: and accumulated into the ``lost_mass`` diagnostic.
MASS_EPS = 1e-15

#: tolerance on |total mass - 1| for a measure flagged as a probability.
PROB_TOL = 1e-12


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported signed measure, sparse and sorted by atom id.

    Attributes
    ----------
    ids : int64 array, strictly increasing atom ids (>= 0).
    masses : float64 array, same length, no entry exactly 0.
    is_probability : bool
        When set, all masses are positive and sum to 1 within PROB_TOL.
    lost_mass : float
        Diagnostic only: total absolute mass dropped below MASS_EPS by the
        arithmetic that produced this measure.
    """

    ids: np.ndarray
    masses: np.ndarray
    is_probability: bool = False
    lost_mass: float = 0.0

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        masses = np.asarray(self.masses, dtype=np.float64)
        if ids.ndim != 1 or masses.ndim != 1 or ids.shape != masses.shape:
            raise ValueError("ids and masses must be 1-D arrays of equal length")
        if ids.size:
            if ids[0] < 0:
                raise ValueError("atom ids must be non-negative")
            if np.any(np.diff(ids) <= 0):
                raise ValueError("atom ids must be strictly increasing")
            if np.any(masses == 0.0):
                raise ValueError("stored masses must be nonzero")
        if self.is_probability:
            if np.any(masses <= 0.0):
                raise ValueError("probability measure requires positive masses")
            if abs(float(masses.sum()) - 1.0) > PROB_TOL:
                raise ValueError(
                    f"probability masses sum to {masses.sum()!r}, expected 1 within {PROB_TOL}"
                )
        object.__setattr__(self, "ids", _as_readonly(ids))
        object.__setattr__(self, "masses", _as_readonly(masses))

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_pairs(
        cls, pairs: Mapping[int, float] | Iterable[tuple[int, float]], *, is_probability: bool = False
    ) -> "DiscreteMeasure":
        items = pairs.items() if isinstance(pairs, Mapping) else list(pairs)
        items = sorted((int(i), float(m)) for i, m in items if m != 0.0)
        ids = np.array([i for i, _ in items], dtype=np.int64)
        masses = np.array([m for _, m in items], dtype=np.float64)
        return cls(ids, masses, is_probability=is_probability)

    @classmethod
    def point_mass(cls, atom: int) -> "DiscreteMeasure":
        return cls(np.array([atom], np.int64), np.array([1.0]), is_probability=True)

    @classmethod
    def uniform(cls, size: int) -> "DiscreteMeasure":
        if size < 1:
            raise ValueError("uniform measure needs at least one atom")
        return cls(np.arange(size, dtype=np.int64), np.full(size, 1.0 / size), is_probability=True)

    @classmethod
    def empirical(cls, sample: np.ndarray) -> "DiscreteMeasure":
        """Empirical probability measure of an integer sample."""
        sample = np.asarray(sample, dtype=np.int64)
        if sample.size == 0:
            raise ValueError("empirical measure of an empty sample")
        ids, counts = np.unique(sample, return_counts=True)
        return cls(ids, counts / sample.size, is_probability=True)

    # -- queries -------------------------------------------------------------
    @property
    def support_size(self) -> int:
        return int(self.ids.size)

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def mass_at(self, atom: int) -> float:
        pos = np.searchsorted(self.ids, atom)
        if pos < self.ids.size and self.ids[pos] == atom:
            return float(self.masses[pos])
        return 0.0

    def mass_of(self, atoms: Iterable[int]) -> float:
        """Measure of a set of atom ids."""
        wanted = np.asarray(sorted(set(int(a) for a in atoms)), dtype=np.int64)
        pos = np.searchsorted(self.ids, wanted)
        pos = pos[pos < self.ids.size]
        hit = self.ids[pos] == wanted[: pos.size] if pos.size else np.zeros(0, bool)
        return float(self.masses[pos[hit]].sum())

    def to_dense(self, size: int) -> np.ndarray:
        """Dense mass vector over atom ids [0, size); ids must fit."""
        if self.ids.size and self.ids[-1] >= size:
            raise ValueError("dense size too small for stored support")
        out = np.zeros(size)
        out[self.ids] = self.masses
        return out

    def cumulative(self) -> np.ndarray:
        """Cumulative masses along the sorted support, for inverse-CDF use."""
        return np.cumsum(self.masses)


def align_supports(p: DiscreteMeasure, q: DiscreteMeasure):
    """Union support and the two mass vectors aligned on it."""
    ids = np.union1d(p.ids, q.ids)
    a = np.zeros(ids.size)
    b = np.zeros(ids.size)
    a[np.searchsorted(ids, p.ids)] = p.masses
    b[np.searchsorted(ids, q.ids)] = q.masses
    return ids, a, b


def signed_difference(p: DiscreteMeasure, q: DiscreteMeasure) -> DiscreteMeasure:
    """The signed measure p - q with near-zero masses dropped."""
    ids, a, b = align_supports(p, q)
    return _compress(ids, a - b)


def _compress(ids: np.ndarray, masses: np.ndarray) -> DiscreteMeasure:
    keep = np.abs(masses) >= MASS_EPS
    lost = float(np.abs(masses[~keep]).sum())
    return DiscreteMeasure(ids[keep], masses[keep], lost_mass=lost)


# ---------------------------------------------------------------------------
# norms and distances
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class WeightSeq:
    """Finite non-negative weight vector with tracked truncation remainder.

    The remainder is the mass cut off by whatever produced the sequence;
    it is reported separately and never folded into the entries.
    """

    weights: np.ndarray
    remainder: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be a 1-D array")
        if np.any(w < 0.0):
            raise ValueError("weights must be non-negative")
        if self.remainder < 0.0:
            raise ValueError("remainder must be non-negative")
        object.__setattr__(self, "weights", _as_readonly(w))

    def __len__(self) -> int:
        return int(self.weights.size)

    def l1(self) -> float:
        return float(self.weights.sum())

    def scaled(self, factor: float) -> "WeightSeq":
        return WeightSeq(self.weights * factor, self.remainder * factor)


def lr_norm(w: WeightSeq | np.ndarray, r: float) -> float:
    """The l^r norm (sum w_i^r)^(1/r); max entry for r = inf; 0 if empty."""
    if r != math.inf and r < 1.0:
        raise ValueError(f"l^r norm requires r >= 1, got {r}")
    v = w.weights if isinstance(w, WeightSeq) else np.asarray(w, dtype=np.float64)
    if v.size == 0:
        return 0.0
    if r == math.inf:
        return float(np.abs(v).max())
    if r == 1.0:
        return float(np.abs(v).sum())
    if r == 2.0:
        return float(np.sqrt(np.square(v).sum()))
    # factor out the max to keep v**r in range for large r
    m = float(np.abs(v).max())
    if m == 0.0:
        return 0.0
    return m * float(np.power(np.abs(v) / m, r).sum()) ** (1.0 / r)


def signed_sup_norm(mu: DiscreteMeasure) -> float:
    """sup over atom subsets C of |mu(C)|.

    Equals max(sum of positive masses, -sum of negative masses), which is
    the same as (sum |m_y| + |sum m_y|) / 2.
    """
    m = mu.masses
    pos = float(m[m > 0.0].sum())
    neg = float(m[m < 0.0].sum())
    return max(pos, -neg, 0.0)


def tv_distance(p: DiscreteMeasure, q: DiscreteMeasure) -> float:
    """Total variation distance sup_C |p(C) - q(C)|.

    For two probability measures this equals half the l1 distance between
    the mass vectors.
    """
    ids, a, b = align_supports(p, q)
    d = a - b
    pos = float(d[d > 0.0].sum())
    neg = float(d[d < 0.0].sum())
    return max(pos, -neg, 0.0)


def ddb_statistic(p: DiscreteMeasure) -> float:
    """Sum over stored atoms of sqrt(mass).

    Convergence of this sum along growing truncations of an infinite-support
    law is the square-root summability criterion that governs whether the
    class of all indicator sets has finite bracketing entropy under the law.
    """
    if np.any(p.masses < 0.0):
        raise ValueError("square-root mass sum requires non-negative masses")
    return float(np.sqrt(p.masses).sum())


def mix(a: DiscreteMeasure, b: DiscreteMeasure, theta: float) -> DiscreteMeasure:
    """Convex mixture theta * a + (1 - theta) * b of two probability measures."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"mixture weight must lie in [0, 1], got {theta}")
    if not (a.is_probability and b.is_probability):
        raise ValueError("mix expects probability measures")
    if theta == 1.0:
        return a
    if theta == 0.0:
        return b
    ids, va, vb = align_supports(a, b)
    mixed = _compress(ids, theta * va + (1.0 - theta) * vb)
    return DiscreteMeasure(
        mixed.ids, mixed.masses, is_probability=True, lost_mass=mixed.lost_mass
    )


# ---------------------------------------------------------------------------
# named families with exact tails
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GeometricFamily:
    """Masses (1 - ratio) * ratio^y on atoms y = 0, 1, 2, ..."""

    ratio: float = 0.5
    name: str = field(default="geometric", init=False)

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("geometric ratio must lie in (0, 1)")

    def masses(self, count: int) -> np.ndarray:
        return (1.0 - self.ratio) * self.ratio ** np.arange(count, dtype=np.float64)

    def tail_mass(self, count: int) -> float:
        return float(self.ratio**count)

    def sqrt_mass_limit(self) -> float:
        """Exact limit of sum_y sqrt(mass_y)."""
        return math.sqrt(1.0 - self.ratio) / (1.0 - math.sqrt(self.ratio))

    def truncate(self, tail_tol: float = 1e-15) -> DiscreteMeasure:
        """Probability measure keeping exact masses, tail below tail_tol.

        Masses are not renormalized, so dyadic band memberships stay exact;
        the tail deficit must fit inside the probability tolerance.
        """
        if not 0.0 < tail_tol <= PROB_TOL:
            raise ValueError(f"tail_tol must lie in (0, {PROB_TOL}] to keep a probability")
        count = int(math.ceil(math.log(tail_tol) / math.log(self.ratio))) + 1
        while self.tail_mass(count) >= tail_tol:
            count += 1
        return DiscreteMeasure(
            np.arange(count, dtype=np.int64), self.masses(count), is_probability=True
        )


@dataclass(frozen=True)
class ZetaFamily:
    """Masses (y + 1)^(-exponent) / zeta(exponent) on atoms y = 0, 1, 2, ..."""

    exponent: float = 2.0
    name: str = field(default="zeta", init=False)

    def __post_init__(self):
        if self.exponent <= 1.0:
            raise ValueError("zeta exponent must exceed 1")

    def masses(self, count: int) -> np.ndarray:
        y = np.arange(1, count + 1, dtype=np.float64)
        return y ** (-self.exponent) / _hurwitz_zeta(self.exponent, 1.0)

    def tail_mass(self, count: int) -> float:
        z = _hurwitz_zeta(self.exponent, 1.0)
        return float(_hurwitz_zeta(self.exponent, count + 1.0) / z)

    def truncate(self, tail_tol: float = 1e-15) -> DiscreteMeasure:
        raise ValueError(
            "zeta tails decay polynomially; a truncation within the probability "
            "tolerance is not materializable (use the family's masses() directly)"
        )


@dataclass(frozen=True)
class UniformFamily:
    """Uniform masses on atoms 0, ..., size - 1."""

    size: int = 8
    name: str = field(default="uniform", init=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("uniform family needs at least one atom")

    def masses(self, count: int) -> np.ndarray:
        return np.full(min(count, self.size), 1.0 / self.size)

    def tail_mass(self, count: int) -> float:
        return max(0.0, (self.size - count) / self.size)

    def truncate(self, tail_tol: float = 1e-15) -> DiscreteMeasure:
        return DiscreteMeasure.uniform(self.size)


@dataclass(frozen=True)
class DiracFamily:
    """Point mass at a single atom."""

    atom: int = 0
    name: str = field(default="dirac", init=False)

    def masses(self, count: int) -> np.ndarray:
        return np.ones(min(count, 1))

    def tail_mass(self, count: int) -> float:
        return 0.0 if count >= 1 else 1.0

    def truncate(self, tail_tol: float = 1e-15) -> DiscreteMeasure:
        return DiscreteMeasure.point_mass(self.atom)


# ---------------------------------------------------------------------------
# canonical CSV serialization
# ---------------------------------------------------------------------------
def write_measure_csv(m: DiscreteMeasure, fh: IO[str]) -> None:
    """One atom per line, 'id,mass', masses at full round-trip precision."""
    for i, v in zip(m.ids, m.masses):
        fh.write(f"{int(i)},{float(v):.17g}\n")


def read_measure_csv(fh: IO[str], *, is_probability: bool = False) -> DiscreteMeasure:
    ids = []
    masses = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        i, v = line.split(",")
        ids.append(int(i))
        masses.append(float(v))
    return DiscreteMeasure(
        np.array(ids, np.int64), np.array(masses), is_probability=is_probability
    )
