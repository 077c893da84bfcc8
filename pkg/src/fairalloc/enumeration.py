"""Lexicographic enumeration of all ``n**m`` allocations in contiguous chunks.

Allocation number ``idx`` has resource ``k`` (0-based) assigned to digit
``k`` of ``idx`` written in base ``n`` with resource 0 as the most
significant digit, so ascending ``idx`` is ascending lexicographic order of
assignment vectors.
"""
from __future__ import annotations

import os

import numpy as np

DEFAULT_CAP = 10**7
CAP_ENV_VAR = "FAIRALLOC_ENUM_CAP"

# elements of the largest (chunk, n, m, n) temporary built per chunk
_CHUNK_BUDGET = 1 << 22


def default_cap() -> int:
    """Enumeration cap, overridable through ``FAIRALLOC_ENUM_CAP``."""
    raw = os.environ.get(CAP_ENV_VAR)
    return int(raw) if raw else DEFAULT_CAP


def allocation_count(n: int, m: int) -> int:
    return n**m


def chunk_size(n: int, m: int) -> int:
    return max(1, _CHUNK_BUDGET // (n * m * n))


def decode(indices: np.ndarray, n: int, m: int) -> np.ndarray:
    """Assignment rows (0-based agents) for the given allocation numbers."""
    indices = np.asarray(indices, dtype=np.int64)
    powers = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return ((indices[:, None] // powers[None, :]) % n).astype(np.intp)


def iter_chunks(n: int, m: int, size: int | None = None, start: int = 0, stop: int | None = None):
    """Yield ``(first_index, assignments)`` over ``[start, stop)`` in order."""
    total = n**m if stop is None else stop
    size = size or chunk_size(n, m)
    for lo in range(start, total, size):
        hi = min(lo + size, total)
        yield lo, decode(np.arange(lo, hi, dtype=np.int64), n, m)


def utility_vectors(values: np.ndarray, assignments: np.ndarray) -> np.ndarray:
    """Own-bundle utility of every agent under every assignment row, shape (N, n)."""
    n, m = values.shape
    own = values[assignments, np.arange(m)]
    out = np.zeros((assignments.shape[0], n), dtype=values.dtype)
    for i in range(n):
        out[:, i] = np.where(assignments == i, own, 0).sum(axis=1)
    return out
