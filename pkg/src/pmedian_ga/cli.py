"""Command-line benchmark driver.

    python -m pmedian_ga --instance data/pmed1.txt --format orlib --nb 60 --nt 256

The report selected by ``--report`` goes to stdout; ``--out`` additionally
writes the structured records (one JSON object per line).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import emit_report, load_instance, read_reference, run_benchmark
from .ga import GaConfig

log = logging.getLogger("pmedian_ga")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pmedian-bench",
        description="Run the block/thread GA on p-median benchmark instances.",
    )
    ap.add_argument("--instance", action="append", required=True, type=Path,
                    help="instance file; repeat to run several sequentially")
    ap.add_argument("--format", choices=("dense", "orlib"), default="dense")
    ap.add_argument("--p", type=int, default=None, help="override p from the file")
    ap.add_argument("--nb", type=int, default=4, help="number of blocks")
    ap.add_argument("--nt", type=int, default=32, help="threads per block (power of two)")
    ap.add_argument("--evolve-limit", type=int, default=100)
    ap.add_argument("--saturation", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=1)
    ap.add_argument("--crossover-iters", type=int, default=None)
    ap.add_argument("--mutation-iters", type=int, default=None)
    ap.add_argument("--migration", choices=("same_block", "team"), default="same_block")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--reference", type=Path, default=None,
                    help="file holding the reference optimum; defaults to <instance>.opt if present")
    ap.add_argument("--out", type=Path, default=None, help="write structured records here")
    ap.add_argument("--report", choices=("table", "structured"), default="table")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _reference_for(instance: Path, explicit: Optional[Path]) -> Optional[int]:
    if explicit is not None:
        return read_reference(explicit)
    sidecar = instance.with_name(instance.name + ".opt")
    if sidecar.exists():
        return read_reference(sidecar)
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = GaConfig(
            nb=args.nb,
            nt=args.nt,
            evolve_limit=args.evolve_limit,
            saturation=args.saturation,
            seed=args.seed,
            crossover_iters=args.crossover_iters,
            mutation_iters=args.mutation_iters,
            migration=args.migration,
        )
        if args.reference is not None and len(args.instance) > 1:
            raise ValueError("--reference applies to a single --instance; use <instance>.opt sidecars")
        records = []
        for path in args.instance:
            instance = load_instance(path, args.format, args.p)
            reference = _reference_for(path, args.reference)
            log.info("running %r (reference=%s)", instance, reference)
            records.append(run_benchmark(instance, cfg, reference_cost=reference,
                                         repeats=args.repeats, workers=args.workers))
    except (OSError, ValueError) as exc:
        print(f"pmedian-bench: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(records, args.report))
    if args.out is not None:
        args.out.write_text(emit_report(records, "structured"))
    return 0
