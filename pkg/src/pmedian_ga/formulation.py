"""Pseudo-Boolean (Hammer-Beresnev) form of the p-median objective.

For each client the facility sites are sorted by distance; the ordering
matrix holds the sorted site indices and the increment matrix holds the
first differences of the sorted distances. With ``p`` sites open, at least
one of any ``m - p + 1`` sites is open, so only the first ``m - p + 1``
columns of either matrix can ever contribute and the rest are dropped.

A client's cost is then the sum of its increments up to and including the
column of its nearest open site. In closure variables ``z_j = 1 - x_j``:

    d_i = delta[i,0] + sum_{k>=1} delta[i,k] * z[pi[i,0]] * ... * z[pi[i,k-1]]

Summed over clients this is the polynomial built by :func:`build_hbp`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .instance import Chromosome, ContractViolation, DimensionError, Instance

Term = tuple[tuple[int, ...], int]


@dataclass(frozen=True, eq=False)
class OrderingTables:
    """Truncated ordering and increment matrices, both ``(n, m - p + 1)``.

    ``pi`` holds 0-based site indices. ``prefix`` is the running sum of
    ``delta`` along each row, kept for the batched evaluator.
    """

    pi: np.ndarray
    delta: np.ndarray
    m: int
    p: int
    prefix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        pi = np.ascontiguousarray(self.pi, dtype=np.int64)
        delta = np.ascontiguousarray(self.delta, dtype=np.int64)
        if pi.shape != delta.shape or pi.ndim != 2:
            raise DimensionError(f"pi {pi.shape} and delta {delta.shape} must be equal 2-d shapes")
        if pi.shape[1] != self.m - self.p + 1:
            raise DimensionError(f"expected {self.m - self.p + 1} columns, got {pi.shape[1]}")
        if (pi < 0).any() or (pi >= self.m).any():
            raise DimensionError("site index out of range in ordering matrix")
        if (delta < 0).any():
            raise ValueError("increments must be non-negative")
        prefix = np.cumsum(delta, axis=1)
        for arr in (pi, delta, prefix):
            arr.flags.writeable = False
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "prefix", prefix)

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    @property
    def width(self) -> int:
        return self.pi.shape[1]


def build_ordering(instance: Instance) -> OrderingTables:
    costs = instance.costs
    # stable sort: equal distances keep ascending site order
    order = np.argsort(costs, axis=1, kind="stable")
    sorted_costs = np.take_along_axis(costs, order, axis=1)
    delta = np.diff(sorted_costs, axis=1, prepend=0)
    width = instance.m - instance.p + 1
    return OrderingTables(order[:, :width], delta[:, :width], instance.m, instance.p)


def fitness(tables: OrderingTables, c: Chromosome) -> int:
    """Accumulate each client's increments until an open site is reached."""
    bits = c.bits
    if len(bits) != tables.m:
        raise DimensionError(f"chromosome has {len(bits)} genes, tables expect m={tables.m}")
    width = tables.width
    total = 0
    for pi_row, delta_row in zip(tables.pi.tolist(), tables.delta.tolist()):
        s = 0
        while True:
            if s == width:
                raise ContractViolation(
                    f"no open site among a client's {width} nearest; chromosome must open p={tables.p} sites"
                )
            total += delta_row[s]
            if bits[pi_row[s]]:
                break
            s += 1
    return total


def fitness_many(tables: OrderingTables, bits: np.ndarray, chunk: int = 16) -> np.ndarray:
    """Vectorised :func:`fitness` over a ``(k, m)`` boolean array.

    Scans ``chunk`` columns at a time and drops each (chromosome, client)
    pair as soon as its first open site is found, so the work follows the
    expected scan length rather than the full table width.
    """
    bits = np.asarray(bits, dtype=bool)
    if bits.ndim != 2 or bits.shape[1] != tables.m:
        raise DimensionError(f"expected shape (k, {tables.m}), got {bits.shape}")
    k, n = bits.shape[0], tables.n
    who = np.repeat(np.arange(k), n)
    client = np.tile(np.arange(n), k)
    found = np.zeros(k * n, dtype=np.int64)
    pending = np.arange(k * n)
    start = 0
    while pending.size:
        if start >= tables.width:
            raise ContractViolation(f"some client has no open site among its {tables.width} nearest")
        stop = min(start + chunk, tables.width)
        rows = client[pending]
        is_open = bits[who[pending, None], tables.pi[rows, start:stop]]
        hit = is_open.any(axis=1)
        done = pending[hit]
        found[done] = tables.prefix[rows[hit], start + is_open[hit].argmax(axis=1)]
        pending = pending[~hit]
        start = stop
    return found.reshape(k, n).sum(axis=1)


@dataclass(frozen=True)
class PseudoBooleanPolynomial:
    """``constant + sum(coeff * prod(z[j] for j in vars))``.

    Each term is ``(vars, coeff)`` with ``vars`` a sorted tuple of distinct
    0-based site indices; ``vars == ()`` is a constant term. Reduced
    polynomials keep ``terms`` free of constant, zero and duplicate entries.
    """

    constant: int
    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        terms = tuple((tuple(sorted(set(v))), int(a)) for v, a in self.terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "constant", int(self.constant))

    @property
    def variables(self) -> set[int]:
        return {j for v, _ in self.terms for j in v}

    def __str__(self) -> str:
        return format_polynomial(self)


def build_hbp(tables: OrderingTables) -> PseudoBooleanPolynomial:
    """Unreduced polynomial, one entry per cell of the increment matrix.

    Entries are emitted client by client; each client's first increment is
    a constant term.
    """
    terms: list[Term] = []
    for pi_row, delta_row in zip(tables.pi.tolist(), tables.delta.tolist()):
        for k, coeff in enumerate(delta_row):
            terms.append((tuple(pi_row[:k]), coeff))
    return PseudoBooleanPolynomial(0, tuple(terms))


def reduce_hbp(poly: PseudoBooleanPolynomial) -> PseudoBooleanPolynomial:
    merged: dict[tuple[int, ...], int] = defaultdict(int)
    for v, a in poly.terms:
        merged[v] += a
    constant = poly.constant + merged.pop((), 0)
    terms = sorted(((v, a) for v, a in merged.items() if a != 0), key=lambda t: (len(t[0]), t[0]))
    return PseudoBooleanPolynomial(constant, tuple(terms))


def evaluate_hbp(poly: PseudoBooleanPolynomial, c: Chromosome) -> int:
    """Value at ``z_j = 1`` for every closed site ``j`` of ``c``."""
    bits = c.bits
    m = len(bits)
    total = poly.constant
    for v, a in poly.terms:
        if v and (v[0] < 0 or v[-1] >= m):
            raise DimensionError(f"variable index out of range for m={m}: {v}")
        if not any(bits[j] for j in v):
            total += a
    return total


def format_polynomial(poly: PseudoBooleanPolynomial) -> str:
    """Line-oriented text export with 1-based variable labels.

    ``constant <c>`` on the first line, then ``<coeff> z<i> z<j> ...`` per
    term in stored order.
    """
    lines = [f"constant {poly.constant}"]
    for v, a in poly.terms:
        lines.append(" ".join([str(a), *(f"z{j + 1}" for j in v)]))
    return "\n".join(lines) + "\n"


def parse_polynomial(text: str) -> PseudoBooleanPolynomial:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "constant" or len(lines[0]) != 2:
        raise ValueError("first line must be 'constant <int>'")
    terms: list[Term] = []
    for fields in lines[1:]:
        coeff, names = int(fields[0]), fields[1:]
        if any(not name.startswith("z") for name in names):
            raise ValueError(f"bad variable name in {' '.join(fields)!r}")
        terms.append((tuple(int(name[1:]) - 1 for name in names), coeff))
    return PseudoBooleanPolynomial(int(lines[0][1]), tuple(terms))

