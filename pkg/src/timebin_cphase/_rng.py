import zlib

import numpy as np


def child_rng(seed: int, label: str, *index: int) -> np.random.Generator:
    """Generator keyed by ``(seed, label, index...)``.

    Streams for different labels or indices are independent, so adding a new
    sampler never shifts the draws of an existing one.
    """
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(label.encode()), *map(int, index)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))
