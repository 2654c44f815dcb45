"""Seeded random streams.

All randomness goes through numpy's PCG64 bit generator. Per-trial streams
are derived from ``(master_seed, trial_index)`` with :class:`numpy.random.SeedSequence`
so results do not depend on the order in which trials are run.
"""
from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64/SeedSequence"


def make_rng(seed=None) -> np.random.Generator:
    """Return a Generator; an existing Generator is passed through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(master_seed: int, index: int) -> int:
    """Deterministic 63-bit child seed for trial ``index``."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    hi, lo = ss.generate_state(2, dtype=np.uint32)
    return int((int(hi) << 31) ^ int(lo))
