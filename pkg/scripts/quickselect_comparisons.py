"""Comparison counts of the k-smallest quickselect, normalized by input size."""

import argparse

import numpy as np

from ltetm.selection import quickselect_k_smallest


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[1000, 4000, 16000, 64000])
    p.add_argument("--fraction", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=50)
    args = p.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'n':>7} {'k':>6} {'cmp/n':>7} {'passes':>7}")
    for n in args.sizes:
        k = max(1, int(np.ceil(args.fraction * n)))
        reports = [quickselect_k_smallest(rng.normal(0, 5, n), k, seed=t) for t in range(args.trials)]
        cmp_n = np.mean([r.comparisons for r in reports]) / n
        print(f"{n:7d} {k:6d} {cmp_n:7.3f} {np.mean([r.passes for r in reports]):7.1f}")


if __name__ == "__main__":
    main()
