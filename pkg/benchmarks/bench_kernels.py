"""Time the numba and numpy validator kernels on growing k-submodular tables.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--max-size 4096]

Both backends must agree on the result; numba timings exclude the first
(compiling) call.
"""

import argparse
import time

import numpy as np

from ksubmod import GroundSet
from ksubmod._kernels import HAVE_NUMBA, ksub_violation, monotone_violation, orthant_violation, pairwise_violation
from ksubmod.functions import _as_int_table, random_ksubmodular_table

CHECKS = {
    "monotone": monotone_violation,
    "pairwise": pairwise_violation,
    "orthant": orthant_violation,
    "k-submodular": ksub_violation,
}


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--max-size", type=int, default=4096, help="largest (k+1)^n to try")
    args = parser.parse_args()
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    print(f"{'check':<13} {'n':>2} {'k':>2} {'size':>6} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n, k in [(3, 2), (4, 2), (5, 2), (4, 3), (6, 2), (5, 3), (6, 3)]:
        if (k + 1) ** n > args.max_size:
            continue
        f = random_ksubmodular_table(rng, GroundSet.of_size(n), k)
        T = _as_int_table(f.values)
        for name, check in CHECKS.items():
            results, times = [], []
            for b in backends:
                check(T, n, k, b)  # warm up / compile
                t, out = best_time(lambda: check(T, n, k, b), args.repeat)
                times.append(t)
                results.append(out)
            assert all(r == results[0] for r in results), (name, results)
            speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else "       -"
            print(f"{name:<13} {n:>2} {k:>2} {(k + 1) ** n:>6} "
                  + " ".join(f"{t * 1e3:>8.2f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
