import numpy as np
import pytest

from wepsim import DiscreteMeasure, GeometricFamily


@pytest.fixture(scope="session")
def geometric_half() -> DiscreteMeasure:
    """Geometric law with ratio 1/2, truncated at the default tail."""
    return GeometricFamily(0.5).truncate()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260808)


def random_signed_measure(rng: np.random.Generator, max_atoms: int = 12) -> DiscreteMeasure:
    k = int(rng.integers(1, max_atoms + 1))
    ids = np.sort(rng.choice(50, size=k, replace=False)).astype(np.int64)
    masses = rng.normal(size=k)
    masses[masses == 0.0] = 0.5
    return DiscreteMeasure(ids, masses)


def random_probability_measure(rng: np.random.Generator, max_atoms: int = 12) -> DiscreteMeasure:
    k = int(rng.integers(1, max_atoms + 1))
    ids = np.sort(rng.choice(50, size=k, replace=False)).astype(np.int64)
    masses = rng.dirichlet(np.ones(k))
    while np.any(masses <= 1e-12):
        masses = rng.dirichlet(np.ones(k))
    return DiscreteMeasure(ids, masses, is_probability=True)


def brute_force_subset_sup(m: DiscreteMeasure) -> float:
    """Max over all atom subsets of |measure(subset)|, by enumeration."""
    k = m.support_size
    best = 0.0
    for bits in range(1 << k):
        total = sum(m.masses[t] for t in range(k) if bits >> t & 1)
        best = max(best, abs(total))
    return best
