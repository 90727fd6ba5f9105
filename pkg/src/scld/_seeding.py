"""Deterministic, labelled random streams derived from one integer seed."""
from __future__ import annotations

from zlib import crc32

import numpy as np


def derive(seed: int, *labels) -> np.random.SeedSequence:
    key = [int(seed) & 0xFFFFFFFF, int(seed) >> 32 & 0xFFFFFFFF]
    key += [crc32(str(x).encode()) for x in labels]
    return np.random.SeedSequence(key)


def rng(seed: int, *labels) -> np.random.Generator:
    return np.random.default_rng(derive(seed, *labels))


def child_seed(seed: int, *labels) -> int:
    return int(derive(seed, *labels).generate_state(1, dtype=np.uint64)[0] >> 1)
