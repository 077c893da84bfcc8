"""
Empirical running time of the greedy allocators
===============================================

Time the allocators on identical-valuation scenarios with n = m and fit
t = c * n * m through the origin.
"""

import sys

from fairalloc.bench import run_bench, scaling_fits

sizes = [int(x) for x in sys.argv[1:]] or [250, 500, 1000, 2000]
records = run_bench(sizes, trials=5, algorithms=["buyer", "buyer-identical", "alg-identical"])

for r in records:
    print(f"n=m={r.n:6d} {r.algorithm:16s} {r.mean_seconds * 1e3:8.3f} ms  (sd {r.stddev_seconds * 1e3:.3f})")

for algo in ("buyer", "buyer-identical", "alg-identical"):
    for fit in scaling_fits(records, algo):
        print(f"{algo:16s} t = {fit.coefficient:.3e} * ({fit.model})   R^2 = {fit.r_squared:.3f}")
