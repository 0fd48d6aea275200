"""Counter-based stream derivation for reproducible parallel replications.

Every consumer of randomness receives a generator derived from the master
seed and an integer path (experiment stage, schedule index, replication
index, ...).  Derivation goes through ``numpy.random.SeedSequence`` spawn
keys, so streams do not depend on execution order or on how replications
are distributed over workers.
"""
from __future__ import annotations

import numpy as np


def derive_rng(master_seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream addressed by (master_seed, *path)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(p) for p in path))
    return np.random.default_rng(ss)
