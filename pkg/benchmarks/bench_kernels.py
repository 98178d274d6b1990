"""Compiled vs pure-Python kernels on the sweeps that dominate the test and acceptance runs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from lpadecomp import _pykernels, kernels


def _random_flat(rng, n, alphabet=(0, 0, 0, 0, 1, 2, -1)):
    return tuple(rng.choice(alphabet) for _ in range(n * n))


def _time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def workloads():
    rng = random.Random(2024)
    flats = [(n, _random_flat(rng, n)) for n in (6, 7, 8) for _ in range(40)]
    mats3 = _pykernels.graph_classes(3, 2)

    def pairs(backend):
        return lambda: [backend.witness_pairs(n, f) for n, f in flats]

    def counts(backend):
        return lambda: backend.compatible_counts(mats3)

    return [
        ("graph_classes(n=3, mult<=2)", lambda b: (lambda: b.graph_classes(3, 2))),
        ("graph_classes(n=4, mult<=1)", lambda b: (lambda: b.graph_classes(4, 1))),
        ("decide_kinds(3x3 classes)", lambda b: (lambda: b.decide_kinds(mats3, False))),
        ("compatible_counts(3x3 classes)", counts),
        ("witness_pairs(120 random, n=6..8)", pairs),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    compiled = kernels.compiled_backend
    if compiled is None:
        print("compiled extension not available; only the Python backend can be timed", file=sys.stderr)
    print(f"{'workload':<36}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, make in workloads():
        py = _time(make(_pykernels), args.repeat)
        if compiled is None:
            print(f"{name:<36}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        cy = _time(make(compiled), args.repeat)
        print(f"{name:<36}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
