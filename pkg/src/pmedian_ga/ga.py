"""Block/thread genetic algorithm over the ordering tables.

The population is ``nb`` blocks of ``nt`` chromosomes. One *kernel* evolves
every block independently:

1. score every thread's chromosome;
2. crossover cycle: for strides ``nt/2, nt/4, ..., 1`` each thread pairs
   with ``t ^ stride``, the pair draws one shared ``(r1, r2)`` and each
   thread keeps its offspring only when it is strictly cheaper;
3. mutation cycle: up to ``lg(nt)`` circular or block shifts per thread,
   stopping at the first strict improvement;
4. stride-halving min-reduction to the block's best.

Between kernels the host draws a fresh random population and migrates each
block's best into it. The run stops after ``saturation`` kernels without a
strict improvement of the global best, or after ``evolve_limit`` kernels.

Threads within a block are simulated in lockstep: every round first builds
all offspring from the pre-round chromosomes, then scores them as one batch.
All randomness comes from streams keyed by ``(seed, purpose, kernel, ...)``,
so a result does not depend on how blocks are scheduled across workers.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from .combinatorics import random_population_bits
from .formulation import OrderingTables, build_ordering, fitness_many
from .instance import Chromosome, ContractViolation, Instance

# stream purposes
_HOST = 0
_CROSSOVER = 1
_MUTATION = 2

Migration = Literal["same_block", "team"]


@dataclass(frozen=True)
class GaConfig:
    nb: int = 4
    nt: int = 32
    evolve_limit: int = 100
    saturation: int = 10
    seed: int = 0
    crossover_iters: Optional[int] = None
    mutation_iters: Optional[int] = None
    migration: Migration = "same_block"

    def __post_init__(self) -> None:
        if self.nt < 2 or self.nt & (self.nt - 1):
            raise ValueError(f"nt must be a power of two >= 2, got {self.nt}")
        if self.nb < 1:
            raise ValueError(f"nb must be >= 1, got {self.nb}")
        if self.evolve_limit < 1:
            raise ValueError(f"evolve_limit must be >= 1, got {self.evolve_limit}")
        if self.saturation < 1:
            raise ValueError(f"saturation must be >= 1, got {self.saturation}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        for name in ("crossover_iters", "mutation_iters"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.migration not in ("same_block", "team"):
            raise ValueError(f"unknown migration variant {self.migration!r}")

    @property
    def log_nt(self) -> int:
        return self.nt.bit_length() - 1

    @property
    def crossover_rounds(self) -> int:
        return self.log_nt if self.crossover_iters is None else self.crossover_iters

    @property
    def mutation_attempts(self) -> int:
        return self.log_nt if self.mutation_iters is None else self.mutation_iters


@dataclass(frozen=True)
class RunResult:
    best: Chromosome
    best_cost: int
    kernels_executed: int
    kernel_of_best: int
    per_kernel_best_costs: tuple[int, ...]
    wall_time: float = field(default=0.0, compare=False)


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


# --- operators ---------------------------------------------------------------


def crossover(a: Chromosome, b: Chromosome, r1: int, r2: int) -> Optional[Chromosome]:
    """Balanced gene exchange; ``None`` when the exchange cannot complete."""
    if a.m != b.m:
        raise ValueError("parents differ in length")
    out = _crossover_bits(list(a.bits), b.bits, r1, r2)
    return None if out is None else Chromosome(tuple(out))


def _crossover_bits(a: list, b: Sequence, r1: int, r2: int) -> Optional[list]:
    m = len(a)
    if not 0 <= r1 < m:
        raise ValueError(f"r1 must be in [0, {m}), got {r1}")
    if r2 < 2 or r2 % 2:
        raise ValueError(f"r2 must be a positive even count, got {r2}")
    up = down = r2 // 2
    child = list(a)
    for s in range(m):
        j = (r1 + s) % m
        if a[j] == b[j]:
            continue
        if a[j]:
            if down:
                child[j] = False
                down -= 1
        elif up:
            child[j] = True
            up -= 1
        if not up and not down:
            return child
    return None


def circular_shift(c: Chromosome, k: int, direction: Literal["left", "right"]) -> Chromosome:
    return Chromosome(tuple(_rotate(list(c.bits), 0, c.m - 1, k, direction)))


def block_shift(
    c: Chromosome, lo: int, hi: int, k: int, direction: Literal["left", "right"]
) -> Chromosome:
    return Chromosome(tuple(_rotate(list(c.bits), lo, hi, k, direction)))


def _rotate(bits: list, lo: int, hi: int, k: int, direction: str) -> list:
    """Rotate ``bits[lo:hi+1]`` by ``k`` places; returns a new list."""
    if not 0 <= lo <= hi < len(bits):
        raise ValueError(f"need 0 <= lo <= hi < {len(bits)}, got lo={lo}, hi={hi}")
    width = hi - lo + 1
    if not 0 <= k < width:
        raise ValueError(f"shift {k} out of range for a span of {width}")
    seg = bits[lo : hi + 1]
    if direction == "left":
        seg = seg[k:] + seg[:k]
    elif direction == "right":
        seg = seg[width - k :] + seg[: width - k]
    else:
        raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")
    return bits[:lo] + seg + bits[hi + 1 :]


def couple_of(t: int, stride: int) -> int:
    """Partner of thread ``t`` in the round with the given stride."""
    return t ^ stride


def couple_table(nt: int) -> list[list[int]]:
    """Partners per crossover round, by the relative-index bookkeeping.

    Kept literal (``rtx`` / ``rb_size``) so tests can check it against
    :func:`couple_of`.
    """
    rounds = []
    rtx = list(range(nt))
    rb_size = nt
    cstride = nt // 2
    while cstride > 0:
        partners = []
        for t in range(nt):
            stride = -cstride if rtx[t] >= rb_size // 2 else cstride
            partners.append(t + stride)
        rounds.append(partners)
        rb_size //= 2
        rtx = [r % rb_size for r in rtx]
        cstride //= 2
    return rounds


def block_min_reduce(costs: Sequence[int]) -> tuple[int, int]:
    """Stride-halving min-reduction; returns ``(cost, thread index)``.

    Slots compare ``(cost, index)`` pairs. A cost-only comparison can leave a
    higher index at slot 0 when costs tie (``[1, 0, 0, 0]`` would give 2).
    """
    min_cost = list(costs)
    tx_min = list(range(len(min_cost)))
    stride = len(min_cost) // 2
    while stride > 0:
        for tx in range(stride):
            other = tx + stride
            if (min_cost[other], tx_min[other]) < (min_cost[tx], tx_min[tx]):
                min_cost[tx] = min_cost[other]
                tx_min[tx] = tx_min[other]
        stride //= 2
    return min_cost[0], tx_min[0]


# --- kernel ------------------------------------------------------------------


def evolve_block(
    block: np.ndarray,
    tables: OrderingTables,
    cfg: GaConfig,
    kernel: int = 0,
    block_index: int = 0,
) -> tuple[np.ndarray, int, np.ndarray, np.ndarray]:
    """Run one kernel on a ``(nt, m)`` boolean block.

    Returns ``(best_bits, best_cost, block, costs)``; the input array is not
    modified.
    """
    nt = block.shape[0]
    if nt != cfg.nt:
        raise ValueError(f"block has {nt} threads, config says nt={cfg.nt}")
    p = tables.p
    block = block.copy()
    costs = fitness_many(tables, block)

    if p >= 2:
        _crossover_cycle(block, costs, tables, cfg, kernel, block_index)
    _mutation_cycle(block, costs, tables, cfg, kernel, block_index)

    best_cost, tx = block_min_reduce(costs.tolist())
    return block[tx].copy(), int(best_cost), block, costs


def couple_params(
    cfg: GaConfig, m: int, p: int, kernel: int, block_index: int, rnd: int, t: int
) -> tuple[int, int]:
    """``(r1, r2)`` shared by thread ``t`` and its partner in round ``rnd``.

    Keyed on the lower index of the pair, so both sides draw the same values.
    """
    stride = cfg.nt >> (rnd % cfg.log_nt + 1)
    rng = stream(cfg.seed, _CROSSOVER, kernel, block_index, rnd, min(t, couple_of(t, stride)))
    r1 = int(rng.integers(m))
    r2 = 2 * int(rng.integers(1, p // 2 + 1))
    return r1, r2


def _crossover_cycle(block, costs, tables, cfg, kernel, block_index) -> None:
    nt, m = block.shape
    for rnd in range(cfg.crossover_rounds):
        # an override longer than lg(nt) repeats the stride sequence
        stride = cfg.nt >> (rnd % cfg.log_nt + 1)
        rows = block.tolist()
        children: list[Optional[list]] = [None] * nt
        for t in range(nt):
            u = couple_of(t, stride)
            if u < t:
                continue
            r1, r2 = couple_params(cfg, m, tables.p, kernel, block_index, rnd, t)
            children[t] = _crossover_bits(rows[t], rows[u], r1, r2)
            children[u] = _crossover_bits(rows[u], rows[t], r1, r2)
        _accept(block, costs, tables, children)


def _mutation_cycle(block, costs, tables, cfg, kernel, block_index) -> None:
    nt = block.shape[0]
    rngs = [stream(cfg.seed, _MUTATION, kernel, block_index * nt + t) for t in range(nt)]
    active = list(range(nt))
    for _ in range(cfg.mutation_attempts):
        if not active:
            break
        rows = block.tolist()
        children: list[Optional[list]] = [None] * nt
        for t in active:
            children[t] = _random_shift(rows[t], rngs[t])
        improved = _accept(block, costs, tables, children)
        active = [t for t in active if t not in improved]


def _random_shift(bits: list, rng: np.random.Generator) -> list:
    m = len(bits)
    direction = "left" if rng.integers(2) else "right"
    if rng.integers(2):
        k = int(rng.integers(1, m))
        return _rotate(bits, 0, m - 1, k, direction)
    lo, hi = sorted(int(x) for x in rng.choice(m, size=2, replace=False))
    k = int(rng.integers(0, hi - lo + 1))
    return _rotate(bits, lo, hi, k, direction)


def _accept(block, costs, tables, children) -> set[int]:
    """Score offspring as one batch; replace strictly improved threads."""
    idx = [t for t, ch in enumerate(children) if ch is not None]
    if not idx:
        return set()
    cand = np.array([children[t] for t in idx], dtype=bool)
    cand_costs = fitness_many(tables, cand)
    better = cand_costs < costs[idx]
    won = np.asarray(idx)[better]
    block[won] = cand[better]
    costs[won] = cand_costs[better]
    return set(won.tolist())


# --- host loop ---------------------------------------------------------------


def random_population(instance: Instance, cfg: GaConfig, rng: np.random.Generator) -> np.ndarray:
    """``(nb, nt, m)`` boolean population drawn from the host stream."""
    flat = random_population_bits(instance.m, instance.p, cfg.nb * cfg.nt, rng)
    return flat.reshape(cfg.nb, cfg.nt, instance.m)


def migrate(population: np.ndarray, bests: np.ndarray, variant: Migration) -> None:
    """Write the previous kernel's block bests into ``population`` in place."""
    nb, nt, _ = population.shape
    if variant == "same_block":
        population[:, 0] = bests
    else:
        # all bests to block 0, spilling into following blocks if nb > nt
        for b, bits in enumerate(bests):
            population[(b // nt) % nb, b % nt] = bits


def run_ga(
    instance: Instance,
    cfg: GaConfig,
    workers: int = 1,
    tables: Optional[OrderingTables] = None,
) -> RunResult:
    """Run the GA until saturation or the kernel limit.

    ``workers > 1`` evolves blocks on a thread pool and draws the next
    population while the current one evolves; the result is identical to
    ``workers == 1``.
    """
    start = time.perf_counter()
    if tables is None:
        tables = build_ordering(instance)
    host = stream(cfg.seed, _HOST)
    population = random_population(instance, cfg, host)

    best_bits: Optional[np.ndarray] = None
    best_cost = math.inf
    kernel_of_best = 0
    unchanged = 0
    trace: list[int] = []

    pool: Optional[Executor] = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        kernel = 0
        while True:
            kernel += 1
            if pool is not None:
                next_pop = pool.submit(random_population, instance, cfg, host)
                outcomes = list(
                    pool.map(
                        lambda b: evolve_block(population[b], tables, cfg, kernel, b),
                        range(cfg.nb),
                    )
                )
            else:
                outcomes = [evolve_block(population[b], tables, cfg, kernel, b) for b in range(cfg.nb)]

            block_bests = np.array([o[0] for o in outcomes])
            block_costs = [o[1] for o in outcomes]
            b = int(np.argmin(block_costs))
            if block_costs[b] < best_cost:
                best_cost = block_costs[b]
                best_bits = block_bests[b]
                kernel_of_best = kernel
                unchanged = 0
            else:
                unchanged += 1
            trace.append(int(best_cost))

            if unchanged >= cfg.saturation or kernel >= cfg.evolve_limit:
                if pool is not None:
                    next_pop.result()
                break
            population = next_pop.result() if pool is not None else random_population(instance, cfg, host)
            migrate(population, block_bests, cfg.migration)
    finally:
        if pool is not None:
            pool.shutdown()

    assert best_bits is not None
    best = Chromosome.from_array(best_bits)
    if best.popcount != instance.p:
        raise ContractViolation("best chromosome lost its open-site count")
    return RunResult(
        best=best,
        best_cost=int(best_cost),
        kernels_executed=kernel,
        kernel_of_best=kernel_of_best,
        per_kernel_best_costs=tuple(trace),
        wall_time=time.perf_counter() - start,
    )


def max_workers() -> int:
    return os.cpu_count() or 1
