"""Binomial coefficients and lexicographic unranking of p-subsets.

A random chromosome costs a single random rank: draw ``r`` uniformly in
``[0, C(m, p))`` and unrank it. Ranks are Python ints, so nothing
overflows at benchmark sizes (``C(900, 90)`` has 126 digits).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .instance import Chromosome


def binomial(m: int, p: int) -> int:
    if m < 0 or p < 0:
        raise ValueError(f"binomial({m}, {p}): arguments must be non-negative")
    if p > m:
        raise ValueError(f"binomial({m}, {p}): p must not exceed m")
    return math.comb(m, p)


def unrank_combination(m: int, p: int, rank: int) -> Chromosome:
    """The ``rank``-th p-subset of ``range(m)`` in lexicographic order.

    Walks the sites left to right. With ``k`` sites still to pick, the
    subsets that take site ``j`` next number ``C(m - j - 1, k - 1)``;
    either the rank falls inside that group or it is skipped. The group
    size is updated incrementally, so the walk is O(m) big-int steps.
    """
    total = binomial(m, p)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range [0, {total}) for C({m},{p})")
    bits = [False] * m
    k = p
    if k == 0:
        return Chromosome(tuple(bits))
    # count = C(m - j - 1, k - 1) for the current j
    count = math.comb(m - 1, k - 1)
    for j in range(m):
        if rank < count:
            bits[j] = True
            k -= 1
            if k == 0:
                break
            # C(m-j-1, k) -> C(m-j-2, k-1)
            count = count * k // (m - j - 1)
        else:
            rank -= count
            # C(m-j-1, k-1) -> C(m-j-2, k-1)
            count = count * (m - j - k) // (m - j - 1)
    return Chromosome(tuple(bits))


def rank_combination(sites: Sequence[int], m: int) -> int:
    """Inverse of :func:`unrank_combination` for sorted 0-based ``sites``."""
    p = len(sites)
    rank = 0
    prev = -1
    for idx, s in enumerate(sites):
        left = p - idx
        for j in range(prev + 1, s):
            rank += math.comb(m - j - 1, left - 1)
        prev = s
    return rank


def random_rank(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in ``[0, bound)`` built from raw 64-bit draws.

    Draws just enough 64-bit words to cover ``bound``, keeps the top
    ``bound.bit_length()`` bits and rejects values ``>= bound``.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    nbits = (bound - 1).bit_length()
    if nbits == 0:
        return 0
    words = (nbits + 63) // 64
    while True:
        value = 0
        for w in rng.bit_generator.random_raw(words).tolist():
            value = (value << 64) | w
        value >>= 64 * words - nbits
        if value < bound:
            return value


def random_chromosome(m: int, p: int, rng: np.random.Generator) -> Chromosome:
    return unrank_combination(m, p, random_rank(rng, binomial(m, p)))


def random_population_bits(m: int, p: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``(count, m)`` boolean array of independent random chromosomes."""
    total = binomial(m, p)
    out = np.zeros((count, m), dtype=bool)
    for row in range(count):
        out[row] = unrank_combination(m, p, random_rank(rng, total)).bits
    return out
