#!/usr/bin/env python3
"""Benchmark the two SSA kernels (compiled extension vs pure Python).

Runs identical seeded trajectories of the bundled gate network through both
backends, checks they agree step for step, and reports throughput.

    python3 benchmarks/bench_ssa.py --trajectories 20 --fuel 500 --count 200
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from crn2dsd import (CompileOptions, available_backends, build_ssa_network,
                     compile_crn, parse_crn, simulate)
from crn2dsd.rng import split

EXAMPLE = (pathlib.Path(__file__).resolve().parents[1]
           / "src" / "crn2dsd" / "data" / "gate_network.crn")


def bench(backend: str, network, initial, seeds) -> tuple[float, int, list]:
    t0 = time.perf_counter()
    steps = 0
    trajectories = []
    for seed in seeds:
        traj = simulate(network, initial, seed, backend=backend)
        steps += len(traj.steps)
        trajectories.append(traj)
    return time.perf_counter() - t0, steps, trajectories


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trajectories", type=int, default=20)
    parser.add_argument("--fuel", type=int, default=500)
    parser.add_argument("--count", type=int, default=200,
                        help="initial copies of every input species")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    crn = parse_crn(EXAMPLE.read_text())
    inputs = sorted({s for r in crn.reactions for s in r.reactants})
    system = compile_crn(crn, CompileOptions(
        fuel_count=args.fuel, initial={s: args.count for s in inputs}))
    network = build_ssa_network(system)
    seeds = [split(args.seed, i) for i in range(args.trajectories)]

    backends = available_backends()
    print(f"network: {len(network.reactions)} reactions, "
          f"{len(network.identities)} identities; "
          f"{args.trajectories} trajectories")
    results = {}
    for backend in backends:
        elapsed, steps, trajectories = bench(backend, network,
                                             system.initial_counts, seeds)
        results[backend] = (elapsed, steps, trajectories)
        print(f"  {backend:>8}: {elapsed:8.3f}s  {steps:>9} steps  "
              f"{steps / elapsed:>12.0f} steps/s")
    if len(backends) == 2:
        py, comp = results["python"], results["compiled"]
        identical = all(a == b for a, b in zip(py[2], comp[2]))
        print(f"  trajectories identical across backends: {identical}")
        print(f"  speedup: {py[0] / comp[0]:.1f}x")
        if not identical:
            return 1
    else:
        print("  (compiled backend not built; showing pure Python only)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
