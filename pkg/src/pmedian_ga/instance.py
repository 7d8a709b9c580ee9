"""Problem data for the uncapacitated p-median problem.

An :class:`Instance` is an ``n x m`` matrix of non-negative integer
distances together with the number ``p`` of facilities to open. A
:class:`Chromosome` is an ``m``-bit open/closed vector. Facilities are
0-based everywhere inside the package; readers and reports convert to the
1-based labels used by benchmark files.

The brute-force evaluators here (:func:`direct_cost`,
:func:`exact_optimum_small`) do not use the ordering tables at all, which is
what makes them usable as ground truth for the fast fitness path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INT64_MAX = np.iinfo(np.int64).max
DEFAULT_ENUMERATION_BUDGET = 10**7


class PMedianError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(PMedianError, ValueError):
    """Shapes or index ranges do not agree."""


class ContractViolation(PMedianError, ValueError):
    """A precondition on the number of open facilities was broken."""


class TooLargeForExactOracle(PMedianError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Instance:
    """A p-median instance.

    Attributes:
        costs: ``(n, m)`` int64 array, ``costs[i, j]`` is the distance from
            client ``i`` to facility site ``j``. Stored read-only.
        p: number of facilities to open, ``1 <= p < m``.
        name: free-form label used in reports.
    """

    costs: np.ndarray
    p: int
    name: str = ""

    def __post_init__(self) -> None:
        raw = np.asarray(self.costs)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise DimensionError(f"cost matrix must be a non-empty 2-d array, got shape {raw.shape}")
        if not np.issubdtype(raw.dtype, np.integer):
            values = list(raw.flat)
            if not all(float(v).is_integer() for v in values):
                raise ValueError("costs must be integers")
            if any(abs(int(v)) > INT64_MAX for v in values):
                raise OverflowError("a cost does not fit in a 64-bit integer")
        costs = raw.astype(np.int64)
        n, m = costs.shape
        if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
            raise TypeError(f"p must be an integer, got {self.p!r}")
        if not 1 <= self.p < m:
            raise ValueError(f"p must satisfy 1 <= p < m (p={self.p}, m={m})")
        if (costs < 0).any():
            raise ValueError("costs must be non-negative")
        if n * int(costs.max()) > INT64_MAX:
            raise OverflowError("n * max(cost) would overflow a 64-bit accumulator")
        costs.flags.writeable = False
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "p", int(self.p))

    @property
    def n(self) -> int:
        return self.costs.shape[0]

    @property
    def m(self) -> int:
        return self.costs.shape[1]

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"Instance({label}n={self.n}, m={self.m}, p={self.p})"


@dataclass(frozen=True)
class Chromosome:
    """Open/closed vector over ``m`` facility sites (``True`` = open)."""

    bits: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def from_open(cls, m: int, open_sites: Iterable[int]) -> Chromosome:
        """Build from 0-based open site indices."""
        bits = [False] * m
        for j in open_sites:
            if not 0 <= j < m:
                raise DimensionError(f"site index {j} out of range for m={m}")
            bits[j] = True
        return cls(tuple(bits))

    @classmethod
    def from_string(cls, s: str) -> Chromosome:
        """Parse a bit string such as ``"1100"``; spaces are ignored."""
        s = s.replace(" ", "")
        if set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(tuple(ch == "1" for ch in s))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> Chromosome:
        return cls(tuple(bool(b) for b in arr))

    @property
    def m(self) -> int:
        return len(self.bits)

    @property
    def popcount(self) -> int:
        return sum(self.bits)

    def open_sites(self) -> tuple[int, ...]:
        """0-based indices of the open sites, ascending."""
        return tuple(j for j, b in enumerate(self.bits) if b)

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=bool)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


def check_chromosome(instance: Instance, c: Chromosome) -> None:
    if c.m != instance.m:
        raise DimensionError(f"chromosome has {c.m} genes, instance has m={instance.m}")
    if c.popcount != instance.p:
        raise ContractViolation(f"chromosome opens {c.popcount} sites, expected p={instance.p}")


def direct_cost(instance: Instance, c: Chromosome, *, enforce_p: bool = True) -> int:
    """Total distance from every client to its nearest open facility.

    ``enforce_p=False`` only skips the popcount check (at least one site must
    still be open); it exists so tests can compare nested open sets.
    """
    if enforce_p:
        check_chromosome(instance, c)
    elif c.m != instance.m:
        raise DimensionError(f"chromosome has {c.m} genes, instance has m={instance.m}")
    open_sites = list(c.open_sites())
    if not open_sites:
        raise ContractViolation("no facility is open")
    return int(instance.costs[:, open_sites].min(axis=1).sum(dtype=np.int64))


def exact_optimum_small(
    instance: Instance,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    chunk: int = 8192,
) -> tuple[Chromosome, int]:
    """Enumerate every p-subset and return the cheapest one.

    Subsets are visited in lexicographic order and only a strictly smaller
    cost replaces the incumbent, so ties resolve to the lexicographically
    smallest open set.
    """
    n, m, p = instance.n, instance.m, instance.p
    total = math.comb(m, p)
    if total > budget:
        raise TooLargeForExactOracle(
            f"instance too large for exact oracle: C({m},{p}) = {total} subsets exceeds budget {budget}"
        )
    costs = instance.costs
    best_cost: int | None = None
    best_set: Sequence[int] = ()
    combos = itertools.combinations(range(m), p)
    while True:
        block = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, chunk)), dtype=np.int64
        ).reshape(-1, p)
        if block.size == 0:
            break
        # (n, k, p) -> per-subset totals
        totals = costs[:, block].min(axis=2).sum(axis=0, dtype=np.int64)
        k = int(np.argmin(totals))
        if best_cost is None or totals[k] < best_cost:
            best_cost = int(totals[k])
            best_set = tuple(int(j) for j in block[k])
    assert best_cost is not None
    return Chromosome.from_open(m, best_set), best_cost
