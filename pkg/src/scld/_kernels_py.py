"""Pure-Python kernels over packed one-hot integers.

Every codeword is one integer with bit ``i*q + symbol`` set per position, so
a descendant is an OR and covering is ``c & d == c``. Works for any ``q``.
"""
from __future__ import annotations

from functools import reduce
from itertools import combinations
from operator import or_

import numpy as np

NAME = "python"


def residual(code, d) -> np.ndarray:
    dp = d.packed
    return np.fromiter((j for j, c in enumerate(code.packed) if c & dp == c), dtype=np.int64)


def coalition_scan(code, t: int, exact: bool = False):
    """Descendant keys and residual sizes for every coalition, in enumeration order.

    Keys here are the packed descendants themselves, so equal keys mean equal
    descendants.
    """
    packed = code.packed
    m = len(packed)
    keys: list[int] = []
    counts: list[int] = []
    sizes = (t,) if exact else range(1, t + 1)
    for s in sizes:
        for combo in combinations(range(m), s):
            d = reduce(or_, (packed[i] for i in combo))
            keys.append(d)
            counts.append(sum(1 for c in packed if c & d == c))
    return keys, np.asarray(counts, dtype=np.int64)


def match_subsets(code, candidates, t: int, d, first_only: bool = True):
    """Subsets of ``candidates`` (size <= t) whose descendant equals ``d``."""
    packed = code.packed
    target = d.packed
    cand = [packed[i] for i in candidates]
    matches = []
    tested = 0
    for s in range(1, min(t, len(cand)) + 1):
        for combo in combinations(range(len(cand)), s):
            tested += 1
            if reduce(or_, (cand[i] for i in combo)) == target:
                matches.append(tuple(candidates[i] for i in combo))
                if first_only:
                    return matches, tested
    return matches, tested
