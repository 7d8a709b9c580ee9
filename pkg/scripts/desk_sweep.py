"""GA vs. exhaustive enumeration on random square instances.

Reports how often the GA hits the exact optimum for several saturation
limits, plus the kernel at which the optimum was first reached.

    python scripts/desk_sweep.py --instances 100 --saturation 5 10 20
"""

import argparse
import statistics
import time

import numpy as np

from pmedian_ga import GaConfig, Instance, exact_optimum_small, run_ga


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--seed", type=int, default=31337, help="instance generator seed")
    ap.add_argument("--m-min", type=int, default=12)
    ap.add_argument("--m-max", type=int, default=20)
    ap.add_argument("--nb", type=int, default=4)
    ap.add_argument("--nt", type=int, default=32)
    ap.add_argument("--evolve-limit", type=int, default=50)
    ap.add_argument("--saturation", type=int, nargs="+", default=[10])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = []
    for _ in range(args.instances):
        m = int(rng.integers(args.m_min, args.m_max + 1))
        p = int(rng.integers(3, m // 2 + 1))
        ins = Instance(rng.integers(0, 1000, size=(m, m)), p)
        cases.append((ins, exact_optimum_small(ins)[1]))

    for sat in args.saturation:
        start = time.perf_counter()
        hits, kernels, misses = 0, [], []
        for k, (ins, opt) in enumerate(cases):
            cfg = GaConfig(nb=args.nb, nt=args.nt, evolve_limit=args.evolve_limit, saturation=sat, seed=k)
            r = run_ga(ins, cfg)
            if r.best_cost == opt:
                hits += 1
                kernels.append(r.kernel_of_best)
            else:
                misses.append((k, ins.m, ins.p, opt, r.best_cost))
        print(f"saturation={sat:3d}: {hits}/{len(cases)} optimal, "
              f"median kernel {statistics.median(kernels) if kernels else '-'}, "
              f"max kernel {max(kernels, default='-')}, {time.perf_counter() - start:.1f} s")
        for miss in misses:
            print("   miss (k, m, p, optimum, found):", miss)


if __name__ == "__main__":
    main()
