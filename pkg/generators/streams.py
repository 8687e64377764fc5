"""
Counter-based random streams.

A realization is identified by a key tuple (e.g. point, model, index); its
seed is derived from the base seed and the key alone, so realizations can
run in any order or process and still reproduce bit for bit.
"""

import numpy as np


def derive_seed(base_seed, *key):
    """64-bit seed for the stream identified by key under base_seed"""
    sequence = np.random.SeedSequence(entropy=int(base_seed), spawn_key=tuple(int(part) for part in key))
    low, high = sequence.generate_state(2, dtype=np.uint32)
    return int(high) << 32 | int(low)


def make_rng(seed):
    return np.random.default_rng(seed)
