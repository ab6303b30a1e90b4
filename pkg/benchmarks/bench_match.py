#!/usr/bin/env python3
"""Benchmark the compiled pattern matcher against the pure-Python fallback.

Generates identical batches of interned triple stores at several sizes,
verifies both backends agree on every problem, then reports per-call
latency and the compiled speedup.

Usage:
    python benchmarks/bench_match.py [--sizes 10,100,300] [--stores 200]
                                     [--repeat 3] [--seed 42]

Larger stores grow the fallback's cost sharply (the join search
backtracks); pass --sizes 1000 explicitly if you have a minute to spare.
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time
from array import array

from semslice import _match_py

try:
    from semslice import _matchcore
except ImportError:  # extension not built in this environment
    _matchcore = None


def rulebook_like_templates(rng: random.Random, n_labels: int):
    """Flat template tables shaped like the shipped rulebook: ten rules,
    one or two templates each, up to three join variables."""
    terms: list[int] = []
    offsets = [0]
    nvars: list[int] = []
    for _ in range(10):
        n_templates = rng.choice((1, 1, 1, 2))
        n_vars = rng.randint(0, 3)
        for _ in range(3 * n_templates):
            roll = rng.random()
            if roll < 0.45 and n_vars:
                terms.append(-2 - rng.randrange(n_vars))  # bound variable
            elif roll < 0.5:
                terms.append(-1)  # wildcard
            else:
                terms.append(rng.randrange(n_labels))
        offsets.append(offsets[-1] + n_templates)
        nvars.append(n_vars)
    return array("i", terms), array("i", offsets), array("i", nvars)


def make_batch(rng: random.Random, size: int, stores: int):
    """One workload: ``stores`` triple stores of ``size`` triples each,
    drawn from a label pool small enough that rules actually match."""
    n_labels = max(8, size // 2)
    templates = rulebook_like_templates(rng, n_labels)
    batch = []
    for _ in range(stores):
        flat = [rng.randrange(n_labels) for _ in range(3 * size)]
        batch.append((array("i", flat), size))
    return templates, batch


def time_backend(backend, templates, batch, repeat: int) -> float:
    """Best-of-``repeat`` seconds to match the whole batch once."""
    terms, offsets, nvars = templates
    laps = []
    for _ in range(repeat):
        start = time.perf_counter()
        for flat, size in batch:
            backend.match_rules(flat, size, terms, offsets, nvars)
        laps.append(time.perf_counter() - start)
    return min(laps)


def check_parity(templates, batch) -> int:
    terms, offsets, nvars = templates
    mismatches = 0
    for flat, size in batch:
        py = list(_match_py.match_rules(flat, size, terms, offsets, nvars))
        cy = list(_matchcore.match_rules(flat, size, terms, offsets, nvars))
        if py != cy:
            mismatches += 1
    return mismatches


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="10,100,300",
                        help="comma-separated store sizes in triples")
    parser.add_argument("--stores", type=int, default=200,
                        help="stores per batch")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing laps per backend (best lap wins)")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    rng = random.Random(args.seed)

    if _matchcore is None:
        print("compiled backend unavailable; timing the fallback only",
              file=sys.stderr)

    header = f"{'triples':>8} {'python ms':>12}"
    if _matchcore is not None:
        header += f" {'cython ms':>12} {'speedup':>8}"
    print(header)

    speedups = []
    for size in sizes:
        templates, batch = make_batch(rng, size, args.stores)
        if _matchcore is not None:
            bad = check_parity(templates, batch)
            if bad:
                print(f"PARITY FAILURE: {bad}/{len(batch)} stores disagree "
                      f"at size {size}", file=sys.stderr)
                return 1
        py_s = time_backend(_match_py, templates, batch, args.repeat)
        line = f"{size:>8} {py_s * 1e3:>12.2f}"
        if _matchcore is not None:
            cy_s = time_backend(_matchcore, templates, batch, args.repeat)
            speedups.append(py_s / cy_s)
            line += f" {cy_s * 1e3:>12.2f} {py_s / cy_s:>7.1f}x"
        print(line)

    if speedups:
        print(f"\nparity ok on every store; geometric-mean speedup "
              f"{statistics.geometric_mean(speedups):.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
