"""Walk through the five-client example: tables, polynomial, optimum, GA run."""

from pmedian_ga import GaConfig, Instance, build_hbp, build_ordering, exact_optimum_small, reduce_hbp, run_ga
from pmedian_ga.formulation import format_polynomial

COSTS = [
    [7, 10, 16, 11],
    [15, 17, 7, 7],
    [10, 4, 6, 6],
    [7, 11, 18, 12],
    [10, 22, 14, 8],
]


def main():
    ins = Instance(COSTS, 2, "example1")
    tables = build_ordering(ins)
    print("ordering (1-based):")
    print(tables.pi + 1)
    print("increments:")
    print(tables.delta)
    raw = build_hbp(tables)
    print(f"\nunreduced polynomial: {len(raw.terms)} entries")
    print("reduced polynomial:")
    print(format_polynomial(reduce_hbp(raw)), end="")

    best, cost = exact_optimum_small(ins)
    print(f"\nexact optimum: open {[j + 1 for j in best.open_sites()]} cost {cost}")
    r = run_ga(ins, GaConfig(nb=2, nt=4, evolve_limit=10, seed=0))
    print(f"GA: open {[j + 1 for j in r.best.open_sites()]} cost {r.best_cost} "
          f"(kernel {r.kernel_of_best} of {r.kernels_executed})")


if __name__ == "__main__":
    main()
