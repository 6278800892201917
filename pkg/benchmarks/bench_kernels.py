"""Time the compiled kernels against their pure-Python fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeat R] [--table-n N]
"""

import argparse
import timeit

import numpy as np

from occamlab import _kernels_py, circuits, kernels

try:
    from occamlab import _kernels as _compiled
except ImportError:
    _compiled = None


def _table(layer, n):
    kernels.threshold_layer = layer
    return circuits.circuit_table.__wrapped__(n)


def _cases(mod, args, rng):
    concepts = np.unique(rng.integers(0, 1 << 12, size=400)).astype(np.int64)
    dna = "ACGT"
    pairs = ["".join(rng.choice(list(dna), size=200)) for _ in range(200)]
    pairs = [(a, a[50:] + b[:50]) for a, b in zip(pairs, pairs[1:])]
    return {
        f"threshold_layer (circuit table n={args.table_n})":
            lambda: _table(mod.threshold_layer, args.table_n),
        "vc_dimension (400 concepts, 12 points)": lambda: mod.vc_dimension(concepts, 12),
        "max_overlap (199 pairs, length 200)":
            lambda: [mod.max_overlap(a, b) for a, b in pairs],
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--table-n", type=int, default=3)
    args = parser.parse_args(argv)
    original = kernels.threshold_layer
    backends = [("python", _kernels_py)] + ([("compiled", _compiled)] if _compiled else [])
    results = {}
    for name, mod in backends:
        for case, fn in _cases(mod, args, np.random.default_rng(0)).items():
            results.setdefault(case, {})[name] = min(timeit.repeat(fn, number=1,
                                                                   repeat=args.repeat))
    kernels.threshold_layer = original
    print(f"{'kernel':<44} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for case, t in results.items():
        comp = t.get("compiled")
        speed = f"{t['python'] / comp:8.1f}" if comp else "       -"
        comp_s = f"{comp:11.4f}" if comp else "          -"
        print(f"{case:<44} {t['python']:10.4f} {comp_s} {speed}")


if __name__ == "__main__":
    main()
