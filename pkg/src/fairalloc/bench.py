"""Wall-clock benchmarks of the allocators on identical-valuation scenarios."""
from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .allocators import ALLOCATORS
from .generators import GenSpec, generate
from .model import Scenario, ScenarioClass

CSV_HEADER = "n,m,algorithm,trials,mean_seconds,stddev_seconds"

BENCH_ALGORITHMS = {
    "buyer": ALLOCATORS["gamma"],
    "buyer-identical": ALLOCATORS["buyer-identical"],
    "alg-identical": ALLOCATORS["alg-identical"],
}

# Mean and standard deviation in seconds (buyer-identical, alg-identical) as
# published for the original implementation at n = m. Hardware-bound: shown
# next to fresh measurements for context, never used as a target.
PUBLISHED_TIMINGS = {
    1000: ((0.0070, 0.0020), (0.0083, 0.0007)),
    2000: ((0.0179, 0.0142), (0.0211, 0.0110)),
    3000: ((0.0250, 0.0028), (0.0317, 0.0019)),
    4000: ((0.0393, 0.0141), (0.0497, 0.0159)),
    5000: ((0.0511, 0.0127), (0.0677, 0.0111)),
    6000: ((0.0684, 0.0179), (0.0990, 0.0155)),
    7000: ((0.0850, 0.0191), (0.1412, 0.0157)),
    8000: ((0.1038, 0.0222), (0.1984, 0.0195)),
    9000: ((0.1251, 0.0222), (0.2601, 0.0184)),
    10000: ((0.1442, 0.0218), (0.3284, 0.0188)),
}


@dataclass(frozen=True)
class BenchRecord:
    n: int
    m: int
    algorithm: str
    trials: int
    mean_seconds: float
    stddev_seconds: float

    def to_csv(self) -> str:
        return (f"{self.n},{self.m},{self.algorithm},{self.trials},"
                f"{self.mean_seconds:.6f},{self.stddev_seconds:.6f}")

    @classmethod
    def from_csv(cls, line: str) -> "BenchRecord":
        n, m, algo, trials, mean, sd = line.strip().split(",")
        return cls(int(n), int(m), algo, int(trials), float(mean), float(sd))


def time_calls(fn: Callable[[Scenario], object], scenario: Scenario, trials: int) -> list[float]:
    """Seconds per call of ``fn(scenario)``; generation and I/O happen outside."""
    scenario.scenario_class  # classification is cached before the clock starts
    out = []
    for _ in range(trials):
        t0 = time.perf_counter()
        fn(scenario)
        out.append(time.perf_counter() - t0)
    return out


def summarize(n: int, m: int, algorithm: str, samples: list[float]) -> BenchRecord:
    sd = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return BenchRecord(n, m, algorithm, len(samples), statistics.fmean(samples), sd)


def run_bench(sizes: Iterable[int], trials: int = 30,
              algorithms: Iterable[str] = ("buyer-identical", "alg-identical"),
              seed: int = 0) -> list[BenchRecord]:
    """Time each algorithm on one identical scenario per size (n = m = size)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    algorithms = list(algorithms)
    for a in algorithms:
        if a not in BENCH_ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    records = []
    for size in sizes:
        s = generate(GenSpec(size, size, ScenarioClass.IDENTICAL, seed=seed))
        for a in algorithms:
            records.append(summarize(size, size, a, time_calls(BENCH_ALGORITHMS[a], s, trials)))
    return records


@dataclass(frozen=True)
class Fit:
    """Least-squares ``t = coefficient * x`` through the origin."""

    model: str
    coefficient: float
    r_squared: float


def fit_through_origin(x: np.ndarray, t: np.ndarray, model: str) -> Fit:
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    c = float(x @ t / (x @ x))
    ss_res = float(((t - c * x) ** 2).sum())
    ss_tot = float(((t - t.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return Fit(model, c, r2)


def scaling_fits(records: list[BenchRecord], algorithm: str) -> list[Fit]:
    """Fits of mean time against ``n*m`` and against ``m*log(m) + n*m``."""
    rows = [r for r in records if r.algorithm == algorithm]
    if len(rows) < 2:
        return []
    t = np.array([r.mean_seconds for r in rows])
    nm = np.array([r.n * r.m for r in rows], dtype=float)
    sort_nm = np.array([r.m * math.log(r.m) + r.n * r.m for r in rows], dtype=float)
    return [fit_through_origin(nm, t, "n*m"), fit_through_origin(sort_nm, t, "m*log(m)+n*m")]
