"""Benchmark ingestion, repeated runs and reporting.

Two instance formats are read:

``dense``
    header ``n m p`` followed by ``n`` rows of ``m`` non-negative integers.
``orlib``
    OR-Library ``pmed``: header ``n edges p`` followed by ``u v cost`` lines
    of an undirected graph on vertices ``1..n``. Costs become all-pairs
    shortest-path distances and every vertex is both client and site.
"""

from __future__ import annotations

import dataclasses
import json
import statistics
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .combinatorics import binomial
from .ga import GaConfig, run_ga
from .instance import INT64_MAX, Instance


class InstanceFormatError(ValueError):
    pass


def _tokens(text: str) -> list[list[str]]:
    return [line.split() for line in text.splitlines() if line.strip()]


def _int(tok: str, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"{what}: expected an integer, got {tok!r}") from None


def parse_dense(text: str, p: Optional[int] = None, name: str = "") -> Instance:
    lines = _tokens(text)
    if not lines or len(lines[0]) != 3:
        raise InstanceFormatError("malformed header: expected 'n m p'")
    n, m, p_file = (_int(t, "header") for t in lines[0])
    if n < 1 or m < 1:
        raise InstanceFormatError(f"malformed header: n and m must be positive (n={n}, m={m})")
    p = p_file if p is None else p
    if not 1 <= p < m:
        raise InstanceFormatError(f"p must be < m and >= 1 (p={p}, m={m})")
    rows = lines[1:]
    if len(rows) != n:
        raise InstanceFormatError(f"row count mismatch: header says {n}, found {len(rows)}")
    costs = []
    for i, row in enumerate(rows, 1):
        if len(row) != m:
            raise InstanceFormatError(f"row {i} has {len(row)} entries, expected {m}")
        values = [_int(t, f"row {i}") for t in row]
        if any(v < 0 for v in values):
            raise InstanceFormatError(f"row {i} contains a negative cost")
        costs.append(values)
    return Instance(np.array(costs, dtype=object), p, name)


def parse_orlib(text: str, p: Optional[int] = None, name: str = "") -> Instance:
    """Read a ``pmed`` graph and close it under shortest paths.

    A repeated edge overwrites the earlier entry for that vertex pair.
    """
    lines = _tokens(text)
    if not lines or len(lines[0]) != 3:
        raise InstanceFormatError("malformed header: expected 'n edges p'")
    n, n_edges, p_file = (_int(t, "header") for t in lines[0])
    if n < 2:
        raise InstanceFormatError(f"need at least 2 vertices, got {n}")
    p = p_file if p is None else p
    if not 1 <= p < n:
        raise InstanceFormatError(f"p must be < m and >= 1 (p={p}, m={n})")
    edges = lines[1:]
    if len(edges) != n_edges:
        raise InstanceFormatError(f"edge count mismatch: header says {n_edges}, found {len(edges)}")
    adj: dict[tuple[int, int], int] = {}
    for k, edge in enumerate(edges, 1):
        if len(edge) != 3:
            raise InstanceFormatError(f"edge line {k}: expected 'u v cost'")
        u, v, c = (_int(t, f"edge line {k}") for t in edge)
        if not (1 <= u <= n and 1 <= v <= n):
            raise InstanceFormatError(f"edge line {k}: vertex index out of range 1..{n}")
        if c < 0:
            raise InstanceFormatError(f"edge line {k}: negative cost")
        if u != v:
            adj[min(u, v) - 1, max(u, v) - 1] = c
    dist = shortest_path_closure(n, adj)
    return Instance(dist, p, name)


def shortest_path_closure(n: int, edges: dict[tuple[int, int], int]) -> np.ndarray:
    """All-pairs shortest paths (Floyd-Warshall) on an undirected graph."""
    inf = INT64_MAX // 4
    d = np.full((n, n), inf, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for (u, v), c in edges.items():
        d[u, v] = d[v, u] = min(c, inf)
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    if (d >= inf).any():
        i, j = (int(x) + 1 for x in np.argwhere(d >= inf)[0])
        raise InstanceFormatError(f"disconnected graph: no path between vertices {i} and {j}")
    return d


PARSERS = {"dense": parse_dense, "orlib": parse_orlib}


def load_instance(path: str | Path, fmt: str = "dense", p: Optional[int] = None) -> Instance:
    if fmt not in PARSERS:
        raise ValueError(f"unknown format {fmt!r}; choose from {sorted(PARSERS)}")
    path = Path(path)
    return PARSERS[fmt](path.read_text(), p=p, name=path.stem)


def read_reference(path: str | Path) -> int:
    text = Path(path).read_text().split()
    if len(text) != 1:
        raise InstanceFormatError(f"{path}: reference file must hold exactly one integer")
    return _int(text[0], str(path))


@dataclass(frozen=True)
class BenchmarkRecord:
    instance_code: str
    n: int
    m: int
    p: int
    search_space: int
    best_cost: int
    reference_cost: Optional[int]
    approximation_ratio: Optional[Fraction]
    kernel_calls: int
    wall_time: float
    seed: int

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        if self.approximation_ratio is not None:
            d["approximation_ratio"] = str(self.approximation_ratio)
        return json.dumps(d)

    @classmethod
    def from_json(cls, line: str) -> BenchmarkRecord:
        d = json.loads(line)
        if d["approximation_ratio"] is not None:
            d["approximation_ratio"] = Fraction(d["approximation_ratio"])
        return cls(**d)


def approximation_ratio(best: int, reference: int) -> Fraction:
    if best == 0:
        return Fraction(1) if reference == 0 else Fraction(0)
    return Fraction(reference, best)


def run_benchmark(
    instance: Instance | str | Path,
    cfg: GaConfig,
    fmt: str = "dense",
    reference_cost: Optional[int] = None,
    repeats: int = 1,
    p: Optional[int] = None,
    workers: int = 1,
) -> BenchmarkRecord:
    """Run the GA ``repeats`` times with seeds ``seed, seed+1, ...``.

    The record keeps the lowest cost found, and the medians of the kernel
    at which each run reached its best and of the wall time.
    """
    if not isinstance(instance, Instance):
        instance = load_instance(instance, fmt, p)
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    results = [
        run_ga(instance, dataclasses.replace(cfg, seed=(cfg.seed + r) % 2**64), workers=workers)
        for r in range(repeats)
    ]
    best = min(r.best_cost for r in results)
    return BenchmarkRecord(
        instance_code=instance.name,
        n=instance.n,
        m=instance.m,
        p=instance.p,
        search_space=binomial(instance.m, instance.p),
        best_cost=best,
        reference_cost=reference_cost,
        approximation_ratio=None if reference_cost is None else approximation_ratio(best, reference_cost),
        kernel_calls=int(statistics.median_low(r.kernel_of_best for r in results)),
        wall_time=float(statistics.median(r.wall_time for r in results)),
        seed=cfg.seed,
    )


def sci(value: int, digits: int = 3) -> str:
    """``75287520 -> '7.53E+07'``, exact for integers of any size."""
    if value == 0:
        return f"{0:.{digits - 1}f}E+00"
    mant, exp = format(Decimal(value), f".{digits - 1}E").split("E")
    e = int(exp)
    return f"{mant}E{'+' if e >= 0 else '-'}{abs(e):02d}"


COLUMNS = (
    "Instance",
    "n",
    "m",
    "p",
    "Potential Solutions",
    "Best Cost",
    "Reference",
    "Approx. Ratio",
    "Kernel Calls",
    "Time (Sec.)",
    "Seed",
)


def _ratio_cell(r: BenchmarkRecord) -> str:
    if r.approximation_ratio is None:
        return "-"
    if r.approximation_ratio == 1:
        return "Optimal"
    return f"{float(r.approximation_ratio):.9f}"


def format_table(records: Iterable[BenchmarkRecord]) -> str:
    rows = [COLUMNS]
    for r in records:
        rows.append(
            (
                r.instance_code,
                str(r.n),
                str(r.m),
                str(r.p),
                sci(r.search_space),
                str(r.best_cost),
                "-" if r.reference_cost is None else str(r.reference_cost),
                _ratio_cell(r),
                str(r.kernel_calls),
                f"{r.wall_time:.3f}",
                str(r.seed),
            )
        )
    widths = [max(len(row[k]) for row in rows) for k in range(len(COLUMNS))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def format_structured(records: Iterable[BenchmarkRecord]) -> str:
    return "".join(r.to_json() + "\n" for r in records)


def parse_structured(text: str) -> list[BenchmarkRecord]:
    return [BenchmarkRecord.from_json(line) for line in text.splitlines() if line.strip()]


def emit_report(records: Iterable[BenchmarkRecord], kind: str = "table") -> str:
    records = list(records)
    if kind == "table":
        return format_table(records)
    if kind == "structured":
        return format_structured(records)
    raise ValueError(f"unknown report kind {kind!r}")
