"""Greedy allocators that maximize utilitarian welfare.

``gamma`` walks the resources in index order and hands each one to the
least-served agent (by partial utility) among those valuing it most,
breaking ties by the smallest agent index. ``gamma_star`` runs the same
step loop after sorting resources by their top valuation, descending.
``alg_identical`` and ``buyer_identical`` are the single-row greedy
procedures for identical valuations used by the benchmark.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotIdenticalScenario
from .model import Allocation, Scenario, ScenarioClass


@dataclass(frozen=True)
class TraceStep:
    """One iteration of the greedy loop. Agent and resource indices are 1-based."""

    resource: int
    alpha: Fraction
    candidates: tuple[int, ...]
    minimizers: tuple[int, ...]
    chosen: int
    partial: tuple[Fraction, ...]


@dataclass(frozen=True)
class AllocatorTrace:
    steps: tuple[TraceStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def _descending_order(alphas: np.ndarray) -> np.ndarray:
    # stable: equal keys keep ascending resource index
    if alphas.dtype == object:
        return np.array(sorted(range(len(alphas)), key=lambda k: -alphas[k]), dtype=np.intp)
    return np.argsort(-alphas, kind="stable")


def _greedy(s: Scenario, order, trace: bool):
    values = s.ints
    n = s.n
    partial = np.zeros(n, dtype=values.dtype)
    owner = np.empty(s.m, dtype=np.intp)
    steps = [] if trace else None
    for k in order:
        col = values[:, k]
        alpha = col.max()
        cands = np.flatnonzero(col == alpha)
        sub = partial[cands]
        j = int(cands[sub.argmin()])
        owner[k] = j
        partial[j] += col[j]
        if trace:
            low = sub.min()
            steps.append(TraceStep(
                resource=int(k) + 1,
                alpha=s.to_fraction(alpha),
                candidates=tuple(int(c) + 1 for c in cands),
                minimizers=tuple(int(c) + 1 for c in cands[sub == low]),
                chosen=j + 1,
                partial=tuple(s.to_fraction(x) for x in partial),
            ))
    alloc = Allocation.from_array(owner)
    return alloc, (AllocatorTrace(tuple(steps)) if trace else None)


def gamma(s: Scenario, trace: bool = True) -> tuple[Allocation, AllocatorTrace | None]:
    """Allocate resources in index order; each goes to a top-valuing agent.

    Returns the allocation and, unless ``trace=False``, the per-step record of
    the top valuation, the candidate set, the least-served candidates and
    the partial utilities after the step. O(nm).
    """
    return _greedy(s, range(s.m), trace)


def processing_order(s: Scenario) -> tuple[int, ...]:
    """1-based resource order used by :func:`gamma_star`."""
    return tuple(int(k) + 1 for k in _descending_order(s.ints.max(axis=0)))


def gamma_star(s: Scenario, trace: bool = True) -> tuple[Allocation, AllocatorTrace | None]:
    """:func:`gamma` over resources sorted by top valuation, descending.

    Ties keep ascending resource index. The allocation is reported in the
    original resource order. O(m log m + nm).
    """
    return _greedy(s, _descending_order(s.ints.max(axis=0)), trace)


def _identical_row(s: Scenario) -> np.ndarray:
    if s.scenario_class is not ScenarioClass.IDENTICAL:
        raise NotIdenticalScenario(
            f"scenario class is {s.scenario_class.value}, identical valuations required")
    return s.ints[0]


def _least_served_greedy(row: np.ndarray, n: int, order) -> Allocation:
    partial = np.zeros(n, dtype=row.dtype)
    owner = np.empty(len(row), dtype=np.intp)
    for k in order:
        j = partial.argmin()
        owner[k] = j
        partial[j] += row[k]
    return Allocation.from_array(owner)


def alg_identical(s: Scenario) -> Allocation:
    """Sort resources by value (descending, stable), then give each to the least-served agent.

    Raises NotIdenticalScenario unless every agent shares one positive valuation row.
    """
    row = _identical_row(s)
    return _least_served_greedy(row, s.n, _descending_order(row))


def buyer_identical(s: Scenario) -> Allocation:
    """Index-order greedy for identical valuations: no sort, no zero test."""
    row = _identical_row(s)
    return _least_served_greedy(row, s.n, range(s.m))


ALLOCATORS = {
    "gamma": lambda s: gamma(s, trace=False)[0],
    "gamma-star": lambda s: gamma_star(s, trace=False)[0],
    "alg-identical": alg_identical,
    "buyer-identical": buyer_identical,
}
