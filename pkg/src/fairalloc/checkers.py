"""Exact welfare and fairness predicates for a single allocation.

Every predicate returns a :class:`Verdict`. A failing verdict carries the
lexicographically smallest witness plus the full ordered list of
violations, all 1-based: ``(envier, envied)`` for EF/EF1 and
``(envier, envied, resource)`` for EFX/EFX0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import enumeration
from .allocators import gamma
from .errors import CapExceeded, PreconditionViolated
from .model import Allocation, Scenario, check_allocation


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: object = None
    violations: tuple = ()
    reason: str | None = None

    @classmethod
    def passed(cls, reason: str | None = None) -> "Verdict":
        return cls(Status.PASS, reason=reason)

    @classmethod
    def failed(cls, witness, violations=(), reason: str | None = None) -> "Verdict":
        return cls(Status.FAIL, witness, tuple(violations) or (witness,), reason)

    @classmethod
    def unknown(cls, reason: str) -> "Verdict":
        return cls(Status.UNKNOWN, reason=reason)

    @property
    def ok(self) -> bool:
        return self.status is Status.PASS

    @property
    def is_fail(self) -> bool:
        return self.status is Status.FAIL

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# shared tables
# ---------------------------------------------------------------------------

def _bundle_masks(owner: np.ndarray, n: int) -> list[np.ndarray]:
    return [owner == j for j in range(n)]


def cross_utilities(s: Scenario, a: Allocation) -> np.ndarray:
    """Scaled ``W[i, j] = u_i(bundle of j)`` as an integer matrix (0-based)."""
    owner = check_allocation(s, a)
    return _cross(s.ints, _bundle_masks(owner, s.n))


def _cross(values: np.ndarray, masks: list[np.ndarray]) -> np.ndarray:
    n = values.shape[0]
    w = np.zeros((n, n), dtype=values.dtype)
    for j, mask in enumerate(masks):
        if mask.any():
            w[:, j] = values[:, mask].sum(axis=1)
    return w


def _envy_gaps(s: Scenario, a: Allocation):
    owner = check_allocation(s, a)
    masks = _bundle_masks(owner, s.n)
    w = _cross(s.ints, masks)
    gap = w - np.diag(w)[:, None]
    return masks, gap


def _envious_pairs(gap: np.ndarray):
    for i, j in np.argwhere(gap > 0):
        yield int(i), int(j)


# ---------------------------------------------------------------------------
# envy predicates
# ---------------------------------------------------------------------------

def is_ef(s: Scenario, a: Allocation) -> Verdict:
    """Envy-freeness: no agent values another bundle above its own."""
    _, gap = _envy_gaps(s, a)
    pairs = [(i + 1, j + 1) for i, j in _envious_pairs(gap)]
    return Verdict.failed(pairs[0], pairs) if pairs else Verdict.passed()


def is_ef1(s: Scenario, a: Allocation) -> Verdict:
    """Envy-freeness up to one good.

    An envious pair is excused when dropping the envied bundle's best good
    (from the envier's view) removes the envy.
    """
    masks, gap = _envy_gaps(s, a)
    values = s.ints
    bad = []
    for i, j in _envious_pairs(gap):
        if values[i, masks[j]].max() < gap[i, j]:
            bad.append((i + 1, j + 1))
    return Verdict.failed(bad[0], bad) if bad else Verdict.passed()


def _removal_violations(s: Scenario, a: Allocation, positive_only: bool):
    masks, gap = _envy_gaps(s, a)
    values = s.ints
    out = []
    for i, j in _envious_pairs(gap):
        goods = np.flatnonzero(masks[j])
        vals = values[i, goods]
        hit = vals < gap[i, j]
        if positive_only:
            hit &= vals > 0
        out.extend((i + 1, j + 1, int(g) + 1) for g in goods[hit])
    return out


def is_efx(s: Scenario, a: Allocation) -> Verdict:
    """Envy-freeness up to any positively valued good."""
    bad = _removal_violations(s, a, positive_only=True)
    return Verdict.failed(bad[0], bad) if bad else Verdict.passed()


def is_efx0(s: Scenario, a: Allocation) -> Verdict:
    """Envy-freeness up to any good, zero-valued goods included."""
    bad = _removal_violations(s, a, positive_only=False)
    return Verdict.failed(bad[0], bad) if bad else Verdict.passed()


def shared_goods(s: Scenario, i: int, j: int) -> tuple[int, ...]:
    """1-based resources both agents value at the same positive amount."""
    vi, vj = s.ints[i - 1], s.ints[j - 1]
    return tuple(int(k) + 1 for k in np.flatnonzero((vi == vj) & (vi > 0)))


def efx0_sufficient_condition(s: Scenario, a: Allocation) -> Verdict:
    """Check that every envied bundle consists only of goods the envier and
    the envied agent both value at the same positive amount.

    Requires a buyer scenario and an EFX allocation. When the condition
    holds the allocation is EFX0; that conclusion is re-checked here and a
    contradiction raises ``AssertionError``.
    """
    if not s.scenario_class.is_buyer:
        raise PreconditionViolated("efx0_sufficient_condition needs a buyer scenario")
    if not is_efx(s, a):
        raise PreconditionViolated("efx0_sufficient_condition needs an EFX allocation")
    masks, gap = _envy_gaps(s, a)
    values = s.ints
    bad = []
    for i, j in _envious_pairs(gap):
        goods = np.flatnonzero(masks[j])
        inside = (values[i, goods] == values[j, goods]) & (values[i, goods] > 0)
        bad.extend((i + 1, j + 1, int(g) + 1) for g in goods[~inside])
    if bad:
        return Verdict.failed(bad[0], bad)
    if not is_efx0(s, a):
        raise AssertionError("sufficient condition holds but the allocation is not EFX0")
    return Verdict.passed()


# ---------------------------------------------------------------------------
# welfare
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WelfareReport:
    per_agent: tuple[Fraction, ...]
    sw_u: Fraction
    sw_nash: Fraction
    max_sw_u: Fraction


def welfare(s: Scenario, a: Allocation) -> WelfareReport:
    owner = check_allocation(s, a)
    own = np.zeros(s.n, dtype=s.ints.dtype)
    np.add.at(own, owner, s.ints[owner, np.arange(s.m)])
    scaled = [int(x) for x in own]
    return WelfareReport(
        per_agent=tuple(Fraction(x, s.scale) for x in scaled),
        sw_u=Fraction(sum(scaled), s.scale),
        sw_nash=Fraction(math.prod(scaled), s.scale**s.n),
        max_sw_u=Fraction(int(s.ints.max(axis=0).sum()), s.scale),
    )


def in_msw_u(s: Scenario, a: Allocation) -> Verdict:
    """Utilitarian-optimal iff welfare equals the sum of per-resource maxima."""
    rep = welfare(s, a)
    if rep.sw_u == rep.max_sw_u:
        return Verdict.passed()
    return Verdict.failed(gamma(s, trace=False)[0],
                          reason=f"sw_u {rep.sw_u} < {rep.max_sw_u}")


def in_msw_nash(s: Scenario, a: Allocation, enumerated) -> Verdict:
    """Nash-optimality against an exhaustive enumeration of ``s``.

    ``enumerated`` is an :class:`~fairalloc.oracle.EnumerationResult`; without
    one the verdict is UNKNOWN.
    """
    if enumerated is None:
        return Verdict.unknown("requires enumeration")
    value = welfare(s, a).sw_nash
    if value == enumerated.msw_nash_value:
        return Verdict.passed()
    return Verdict.failed(enumerated.msw_nash_set[0],
                          reason=f"sw_nash {value} < {enumerated.msw_nash_value}")


# ---------------------------------------------------------------------------
# Pareto optimality
# ---------------------------------------------------------------------------

def _buyer_dominator(s: Scenario, owner: np.ndarray) -> Allocation | None:
    values = s.ints
    alphas = values.max(axis=0)
    for k in range(s.m):
        if values[owner[k], k] < alphas[k]:
            moved = owner.copy()
            moved[k] = int(np.flatnonzero(values[:, k] == alphas[k])[0])
            return Allocation.from_array(moved)
    return None


def _brute_dominator(s: Scenario, owner: np.ndarray, chunk: int | None = None):
    values = s.ints
    base = enumeration.utility_vectors(values, owner[None, :])[0]
    for _, rows in enumeration.iter_chunks(s.n, s.m, size=chunk):
        u = enumeration.utility_vectors(values, rows)
        dom = (u >= base).all(axis=1) & (u > base).any(axis=1)
        hits = np.flatnonzero(dom)
        if len(hits):
            return Allocation.from_array(rows[hits[0]])
    return None


def is_po(s: Scenario, a: Allocation, mode: str = "auto", cap: int | None = None,
          chunk: int | None = None) -> Verdict:
    """Pareto optimality.

    ``mode="brute"`` scans all ``n**m`` allocations (CapExceeded beyond
    ``cap``) and reports the lexicographically smallest dominating allocation.
    ``mode="buyer"`` uses the buyer-scenario equivalence with utilitarian
    optimality and reports a dominator that moves one misassigned resource.
    ``mode="auto"`` picks ``buyer`` on buyer scenarios, else ``brute``, and
    returns UNKNOWN instead of raising when the scan would exceed the cap.
    """
    owner = check_allocation(s, a)
    cap = enumeration.default_cap() if cap is None else cap
    if mode == "auto":
        if s.scenario_class.is_buyer:
            mode = "buyer"
        elif s.n**s.m > cap:
            return Verdict.unknown(f"CapExceeded: {s.n}^{s.m} > {cap}")
        else:
            mode = "brute"
    if mode == "buyer":
        if not s.scenario_class.is_buyer:
            raise PreconditionViolated("buyer shortcut needs a buyer scenario")
        dom = _buyer_dominator(s, owner)
        return Verdict.passed(reason="buyer") if dom is None else Verdict.failed(dom, reason="buyer")
    if mode == "brute":
        if s.n**s.m > cap:
            raise CapExceeded(s.n, s.m, cap)
        dom = _brute_dominator(s, owner, chunk)
        return Verdict.passed(reason="brute") if dom is None else Verdict.failed(dom, reason="brute")
    if mode == "off":
        return Verdict.unknown("not requested")
    raise ValueError(f"unknown PO mode {mode!r}")


# ---------------------------------------------------------------------------
# batch predicates (one row per allocation) used by the enumeration oracle
# ---------------------------------------------------------------------------

def batch_envy_flags(values: np.ndarray, rows: np.ndarray, buyer: bool = False) -> dict[str, np.ndarray]:
    """EF, EF1, EFX, EFX0 (and the EFX0 sufficient condition when ``buyer``)
    for every assignment row at once, by tensor operations independent of the
    per-allocation predicates above.
    """
    n, m = values.shape
    big = int(values.sum()) + 1
    held = rows[:, :, None] == np.arange(n)[None, None, :]          # (N, m, n_j)
    v = values[None, :, :, None]                                       # (1, n_i, m, 1)
    h = held[:, None, :, :]                                            # (N, 1, m, n_j)
    cross = np.where(h, v, 0).sum(axis=2)                              # (N, n_i, n_j)
    gap = cross - np.diagonal(cross, axis1=1, axis2=2)[:, :, None]
    envy = gap > 0
    best = np.where(h, v, 0).max(axis=2)
    low_pos = np.where(h & (v > 0), v, big).min(axis=2)
    low_any = np.where(h, v, big).min(axis=2)
    flags = {
        "ef": ~envy.any(axis=(1, 2)),
        "ef1": ~(envy & (best < gap)).any(axis=(1, 2)),
        "efx": ~(envy & (low_pos < gap)).any(axis=(1, 2)),
        "efx0": ~(envy & (low_any < gap)).any(axis=(1, 2)),
    }
    if buyer:
        same = (values[:, None, :] == values[None, :, :]) & (values[:, None, :] > 0)  # (i, j, k)
        outside = ~np.transpose(same, (0, 2, 1))                       # (i, k, j)
        spill = (h & outside[None, :, :, :]).any(axis=2)
        flags["efx0_sufficient"] = ~(envy & spill).any(axis=(1, 2))
    return flags


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FairnessReport:
    ef: Verdict
    efx0: Verdict
    efx: Verdict
    ef1: Verdict
    po: Verdict
    in_msw_u: Verdict
    in_msw_nash: Verdict

    FIELDS = ("ef", "efx0", "efx", "ef1", "po", "in_msw_u", "in_msw_nash")

    def items(self):
        return [(name, getattr(self, name)) for name in self.FIELDS]

    def chain_holds(self) -> bool:
        """EF => EFX0 => EFX => EF1 on the verdicts of this report."""
        chain = [self.ef.ok, self.efx0.ok, self.efx.ok, self.ef1.ok]
        return all(not x or y for x, y in zip(chain, chain[1:]))


def check_fairness(s: Scenario, a: Allocation, po_mode: str = "auto", cap: int | None = None,
                   enumerated=None) -> FairnessReport:
    return FairnessReport(
        ef=is_ef(s, a),
        efx0=is_efx0(s, a),
        efx=is_efx(s, a),
        ef1=is_ef1(s, a),
        po=is_po(s, a, mode=po_mode, cap=cap),
        in_msw_u=in_msw_u(s, a),
        in_msw_nash=in_msw_nash(s, a, enumerated),
    )
