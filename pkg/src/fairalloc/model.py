"""Scenarios, allocations and their text formats.

Valuations are exact rationals. Internally a scenario keeps an integer
matrix ``ints`` and a positive common denominator ``scale`` so that
``u_i(r_k) == Fraction(ints[i, k], scale)``. Scaling every utility by the
same positive constant preserves all comparisons, so the allocators and
checkers work on the integer matrix directly and never round.

Agents and resources are 1-based at every public surface (allocation
vectors, witnesses, file formats, ``bundle_utility``); numpy arrays handed
out by ``Allocation.to_array`` are 0-based.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Integral
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDimension,
    IndexOutOfRange,
    NegativeUtility,
    ParseError,
)

# Partial sums must stay below this to use int64 arithmetic.
_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def to_fraction(x) -> Fraction:
    """Convert ``x`` to an exact :class:`~fractions.Fraction`.

    Strings may be integers, decimals (``"0.25"``, ``"1e-3"``) or ``"p/q"``.
    Floats are read through ``repr`` so that ``0.1`` means one tenth rather
    than the nearest binary double.
    """
    if isinstance(x, bool):
        raise ParseError(f"not a number: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ParseError(f"not a finite number: {x!r}")
        return Fraction(repr(float(x)))
    if isinstance(x, Decimal):
        if not x.is_finite():
            raise ParseError(f"not a finite number: {x!r}")
        return Fraction(x)
    raise ParseError(f"cannot interpret {x!r} as a rational number")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction | int) -> str:
    """Shortest exact text for ``x``: an integer, a terminating decimal, or ``p/q``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    digits = abs(x.numerator) * 10**places // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(digits, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}".rstrip("0")


# ---------------------------------------------------------------------------
# Scenario classes
# ---------------------------------------------------------------------------

class ScenarioClass(enum.Enum):
    """Most specific valuation class of a scenario.

    ``IDENTICAL`` implies ``BUYER`` implies ``GENERAL``.
    """

    GENERAL = "general"
    BUYER = "buyer"
    IDENTICAL = "identical"

    def satisfies(self, required: "ScenarioClass") -> bool:
        """True when a scenario of this class also belongs to ``required``."""
        rank = {ScenarioClass.GENERAL: 0, ScenarioClass.BUYER: 1, ScenarioClass.IDENTICAL: 2}
        return rank[self] >= rank[required]

    @property
    def is_buyer(self) -> bool:
        return self.satisfies(ScenarioClass.BUYER)


# ---------------------------------------------------------------------------
# Scenario
# ---------------------------------------------------------------------------

def _freeze(arr: np.ndarray) -> np.ndarray:
    if arr.flags.writeable:
        arr = arr.copy()
        arr.flags.writeable = False
    return arr


class Scenario:
    """An additive scenario: ``n`` agents, ``m`` indivisible resources.

    Build one with :func:`validate_scenario` (arbitrary rationals) or
    :meth:`Scenario.from_integers` (integer matrices, no conversion cost).
    Instances are immutable.
    """

    __slots__ = ("_ints", "_scale", "_label", "_class")

    def __init__(self, ints: np.ndarray, scale: int = 1, label: str | None = None):
        if ints.ndim != 2:
            raise DimensionMismatch(f"valuation matrix must be 2-D, got shape {ints.shape}")
        n, m = ints.shape
        if n == 0 or m == 0:
            raise EmptyDimension(n, m)
        if scale < 1:
            raise ValueError("scale must be a positive integer")
        if scale > 1:
            g = math.gcd(scale, int(np.gcd.reduce(ints, axis=None)) if ints.dtype != object
                         else math.gcd(*(int(v) for v in ints.ravel())))
            if g > 1:
                ints = ints // g
                scale //= g
        object.__setattr__(self, "_ints", _freeze(ints))
        object.__setattr__(self, "_scale", int(scale))
        object.__setattr__(self, "_label", label)
        object.__setattr__(self, "_class", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scenario is immutable")

    @classmethod
    def from_integers(cls, matrix, label: str | None = None) -> "Scenario":
        """Wrap a non-negative integer matrix. Broadcast (stride-0) views are kept as views."""
        arr = np.asarray(matrix)
        if arr.ndim != 2:
            raise DimensionMismatch(f"valuation matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmptyDimension(*arr.shape)
        if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
            return validate_scenario(arr.tolist(), label=label)
        neg = np.argwhere(arr < 0)
        if len(neg):
            i, k = neg[0]
            raise NegativeUtility(int(i) + 1, int(k) + 1, int(arr[i, k]))
        peak = int(arr.max())
        if peak * arr.shape[1] >= _INT64_SAFE:
            arr = arr.astype(object)
        elif arr.dtype != np.int64:
            arr = arr.astype(np.int64)
        return cls(arr, 1, label)

    # -- shape and values ---------------------------------------------------

    @property
    def n(self) -> int:
        return self._ints.shape[0]

    @property
    def m(self) -> int:
        return self._ints.shape[1]

    @property
    def label(self) -> str | None:
        return self._label

    @property
    def ints(self) -> np.ndarray:
        """Read-only integer matrix; utilities are ``ints / scale``."""
        return self._ints

    @property
    def scale(self) -> int:
        return self._scale

    def value(self, agent: int, resource: int) -> Fraction:
        """``u_agent(r_resource)`` with 1-based indices."""
        _check_index(agent, self.n, "agent")
        _check_index(resource, self.m, "resource")
        return Fraction(int(self._ints[agent - 1, resource - 1]), self._scale)

    @property
    def valuations(self) -> tuple[tuple[Fraction, ...], ...]:
        s = self._scale
        return tuple(tuple(Fraction(int(v), s) for v in row) for row in self._ints)

    def alphas(self) -> tuple[Fraction, ...]:
        """Per-resource maximum valuation over agents."""
        return tuple(Fraction(int(v), self._scale) for v in self._ints.max(axis=0))

    def to_fraction(self, scaled) -> Fraction:
        """Undo the internal scaling of an integer quantity."""
        return Fraction(int(scaled), self._scale)

    @property
    def scenario_class(self) -> ScenarioClass:
        if self._class is None:
            object.__setattr__(self, "_class", classify_scenario(self))
        return self._class

    # -- identity -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (self.n == other.n and self.m == other.m and self._scale == other._scale
                and bool(np.array_equal(self._ints, other._ints)))

    def __hash__(self) -> int:
        return hash((self.n, self.m, self._scale, np.ascontiguousarray(self._ints).tobytes()))

    def __repr__(self) -> str:
        tag = f", label={self._label!r}" if self._label else ""
        return f"Scenario(n={self.n}, m={self.m}{tag})"


def _check_index(idx: int, size: int, what: str) -> None:
    if isinstance(idx, bool) or not isinstance(idx, Integral) or not 1 <= idx <= size:
        raise IndexOutOfRange(f"{what} index {idx!r} outside [1, {size}]")


def validate_scenario(raw_matrix, label: str | None = None) -> Scenario:
    """Validate an ``n x m`` matrix of non-negative rationals and build a Scenario.

    Raises
    ------
    EmptyDimension
        if the matrix has no rows or no columns.
    NegativeUtility
        for the first negative cell in row-major order (1-based indices).
    DimensionMismatch
        if the rows have different lengths.
    """
    if isinstance(raw_matrix, np.ndarray) and raw_matrix.dtype != object \
            and np.issubdtype(raw_matrix.dtype, np.integer):
        return Scenario.from_integers(raw_matrix, label=label)
    rows = [list(r) for r in raw_matrix]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if n == 0 or m == 0:
        raise EmptyDimension(n, m)
    for i, r in enumerate(rows):
        if len(r) != m:
            raise DimensionMismatch(f"row {i + 1} has {len(r)} entries, expected {m}")
    fracs = [[to_fraction(x) for x in r] for r in rows]
    for i, r in enumerate(fracs):
        for k, x in enumerate(r):
            if x < 0:
                raise NegativeUtility(i + 1, k + 1, x)
    scale = math.lcm(*(x.denominator for r in fracs for x in r))
    ints = [[x.numerator * (scale // x.denominator) for x in r] for r in fracs]
    peak = max(max(r) for r in ints)
    dtype = np.int64 if peak * m < _INT64_SAFE else object
    return Scenario(np.array(ints, dtype=dtype), scale, label)


def classify_scenario(s: Scenario) -> ScenarioClass:
    """Return the most specific class the valuations belong to."""
    v = s.ints
    if v.strides[0] == 0:
        # broadcast rows: all agents share one row
        return ScenarioClass.IDENTICAL if bool((v[0] > 0).all()) else ScenarioClass.BUYER
    colmax = v.max(axis=0)
    if not bool(((v == colmax) | (v == 0)).all()):
        return ScenarioClass.GENERAL
    if bool((v > 0).all()):
        return ScenarioClass.IDENTICAL
    return ScenarioClass.BUYER


# ---------------------------------------------------------------------------
# Allocation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Allocation:
    """Total map from resources to agents: ``assignment[k-1]`` receives ``r_k``."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(a) for a in self.assignment)
        if not values:
            raise EmptyDimension(0, 0)
        if min(values) < 1:
            raise IndexOutOfRange(f"agent indices are 1-based, got {min(values)}")
        object.__setattr__(self, "assignment", values)

    @classmethod
    def from_array(cls, zero_based: Iterable[int]) -> "Allocation":
        return cls(tuple(int(a) + 1 for a in zero_based))

    @property
    def m(self) -> int:
        return len(self.assignment)

    def to_array(self) -> np.ndarray:
        """0-based agent index per resource."""
        return np.fromiter((a - 1 for a in self.assignment), dtype=np.intp, count=self.m)

    def bundle(self, agent: int) -> tuple[int, ...]:
        """1-based resource indices held by ``agent``."""
        return tuple(k + 1 for k, a in enumerate(self.assignment) if a == agent)

    def bundles(self, n: int) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(n)]
        for k, a in enumerate(self.assignment):
            out[a - 1].append(k + 1)
        return [tuple(b) for b in out]

    def __len__(self) -> int:
        return self.m

    def __str__(self) -> str:
        return " ".join(map(str, self.assignment))


def check_allocation(s: Scenario, a: Allocation) -> np.ndarray:
    """Return the 0-based assignment array, raising if ``a`` does not fit ``s``."""
    if a.m != s.m:
        raise DimensionMismatch(f"allocation covers {a.m} resources, scenario has {s.m}")
    if max(a.assignment) > s.n:
        raise DimensionMismatch(f"allocation uses agent {max(a.assignment)}, scenario has {s.n}")
    return a.to_array()


def agent_utilities_scaled(s: Scenario, a: Allocation) -> np.ndarray:
    """Integer vector of own-bundle utilities (times ``s.scale``)."""
    owner = check_allocation(s, a)
    own = s.ints[owner, np.arange(s.m)]
    out = np.zeros(s.n, dtype=s.ints.dtype)
    np.add.at(out, owner, own)
    return out


def bundle_utility(s: Scenario, a: Allocation, agent: int) -> Fraction:
    """Utility of ``agent`` (1-based) for its own bundle; 0 for an empty bundle."""
    _check_index(agent, s.n, "agent")
    owner = check_allocation(s, a)
    return Fraction(int(s.ints[agent - 1, owner == agent - 1].sum()), s.scale)


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def _data_lines(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def parse_scenario(text: str, label: str | None = None) -> Scenario:
    lines = _data_lines(text)
    if not lines:
        raise ParseError("empty scenario file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"expected 'n m' header, got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}") from exc
    if n < 1 or m < 1:
        raise EmptyDimension(n, m)
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"expected {n} valuation rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != m:
            raise ParseError(f"row {i + 1}: expected {m} values, found {len(toks)}")
        rows.append(toks)
    if all(t.isdigit() for r in rows for t in r):
        ints = [[int(t) for t in r] for r in rows]
        if max(map(max, ints)) * m < _INT64_SAFE:
            return Scenario.from_integers(np.array(ints, dtype=np.int64), label=label)
    return validate_scenario(rows, label=label)


def format_scenario(s: Scenario) -> str:
    out = [f"{s.n} {s.m}"]
    if s.scale == 1:
        out.extend(" ".join(map(str, row.tolist())) for row in s.ints)
    else:
        out.extend(" ".join(format_rational(Fraction(int(v), s.scale)) for v in row) for row in s.ints)
    return "\n".join(out) + "\n"


def parse_allocation(text: str) -> Allocation:
    lines = _data_lines(text)
    if len(lines) != 1:
        raise ParseError(f"allocation file needs exactly one data line, found {len(lines)}")
    try:
        return Allocation(tuple(int(t) for t in lines[0].split()))
    except ValueError as exc:
        raise ParseError(f"bad allocation line {lines[0]!r}") from exc


def format_allocation(a: Allocation) -> str:
    return str(a) + "\n"


def read_scenario(path: str | os.PathLike) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read(), label=None)


def write_scenario(s: Scenario, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_scenario(s))


def read_allocation(path: str | os.PathLike) -> Allocation:
    with open(path, encoding="utf-8") as fh:
        return parse_allocation(fh.read())


def write_allocation(a: Allocation, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_allocation(a))
