"""Genetic algorithm for the p-median problem over its pseudo-Boolean form."""

from .bench import BenchmarkRecord, emit_report, parse_dense, parse_orlib, run_benchmark
from .combinatorics import binomial, random_chromosome, rank_combination, unrank_combination
from .formulation import (
    OrderingTables,
    PseudoBooleanPolynomial,
    build_hbp,
    build_ordering,
    evaluate_hbp,
    fitness,
    fitness_many,
    reduce_hbp,
)
from .ga import GaConfig, RunResult, block_shift, circular_shift, crossover, evolve_block, run_ga
from .instance import (
    Chromosome,
    ContractViolation,
    DimensionError,
    Instance,
    TooLargeForExactOracle,
    direct_cost,
    exact_optimum_small,
)

__all__ = [
    "BenchmarkRecord",
    "Chromosome",
    "ContractViolation",
    "DimensionError",
    "GaConfig",
    "Instance",
    "OrderingTables",
    "PseudoBooleanPolynomial",
    "RunResult",
    "TooLargeForExactOracle",
    "binomial",
    "block_shift",
    "build_hbp",
    "build_ordering",
    "circular_shift",
    "crossover",
    "direct_cost",
    "emit_report",
    "evaluate_hbp",
    "evolve_block",
    "exact_optimum_small",
    "fitness",
    "fitness_many",
    "parse_dense",
    "parse_orlib",
    "random_chromosome",
    "rank_combination",
    "reduce_hbp",
    "run_benchmark",
    "run_ga",
    "unrank_combination",
]
