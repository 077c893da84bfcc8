"""Brute-force ground truth over all ``n**m`` allocations of a small scenario.

:func:`enumerate_all` visits allocations in lexicographic order of their
assignment vectors, chunk by chunk, and builds the exact utilitarian-optimal,
Nash-optimal, maximal-support Nash and Pareto-optimal sets together with
per-predicate tallies. :func:`verify_theorems` cross-checks the allocators
and the structural claims about buyer scenarios against that ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import enumeration
from .allocators import gamma, gamma_star
from .checkers import batch_envy_flags, is_ef1, is_efx
from .errors import CapExceeded, MismatchedInput
from .model import Allocation, Scenario

PREDICATES = ("ef", "efx0", "efx", "ef1")


@dataclass(frozen=True)
class EnumerationResult:
    scenario: Scenario
    total: int
    msw_u_value: Fraction
    msw_u_set: tuple[Allocation, ...]
    msw_nash_value: Fraction
    msw_nash_set: tuple[Allocation, ...]
    maximal_support_size: int
    maximal_support_value: Fraction
    msw_nash_maximal_support_set: tuple[Allocation, ...]
    po_set: tuple[Allocation, ...]
    # allocations passing each predicate; "efx0_sufficient" counts EFX ones only
    counts: dict[str, int]
    # predicate flags aligned with each reported set, e.g. set_flags["msw_u"]["ef1"]
    set_flags: dict[str, dict[str, np.ndarray]] = field(repr=False)
    # allocations breaking EF => EFX0 => EFX => EF1
    chain_violations: tuple[Allocation, ...] = ()
    # EFX allocations meeting the EFX0 sufficient condition but not EFX0 (buyer only)
    sufficient_violations: tuple[Allocation, ...] = ()
    # msw_nash members missing from po_set
    nash_not_po: tuple[Allocation, ...] = ()
    # maximal-support Nash members missing from po_set
    support_not_po: tuple[Allocation, ...] = ()


def _decode_all(indices, n: int, m: int) -> tuple[Allocation, ...]:
    if len(indices) == 0:
        return ()
    rows = enumeration.decode(np.asarray(indices, dtype=np.int64), n, m)
    return tuple(Allocation.from_array(r) for r in rows)


def _products(u: np.ndarray, exact: bool) -> np.ndarray:
    return u.astype(object).prod(axis=1) if exact else u.prod(axis=1)


def _nondominated(q: np.ndarray) -> np.ndarray:
    """Pareto front of distinct utility vectors ``q``.

    Rows are visited by decreasing sum. A row can only be dominated by a row
    of strictly larger sum, and every dominated row is dominated by some
    front row, so comparing against the front built so far is enough.
    """
    sums = q.sum(axis=1)
    order = np.argsort(-sums, kind="stable") if q.dtype != object else \
        np.array(sorted(range(len(q)), key=lambda i: -sums[i]), dtype=np.intp)
    front = np.empty_like(q)
    size = 0
    top = sums[order[0]]
    for idx in order:
        row = q[idx]
        # distinct rows: f >= row componentwise already means f dominates row
        if sums[idx] < top and (front[:size] >= row).all(axis=1).any():
            continue
        front[size] = row
        size += 1
    return front[:size]


class _RowKeys:
    """Injective integer keys for utility rows when they fit in int64."""

    def __init__(self, values: np.ndarray):
        n = values.shape[0]
        base = int(values.sum(axis=1).max()) + 1
        self.ok = values.dtype != object and base**n < 2**62
        if self.ok:
            self.radix = np.array([base**i for i in range(n)], dtype=np.int64)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return u @ self.radix


def _unique_rows(u: np.ndarray, keys: _RowKeys) -> np.ndarray:
    if keys.ok:
        _, first = np.unique(keys(u), return_index=True)
        return u[first]
    return np.array(sorted(set(map(tuple, u.tolist()))), dtype=object).reshape(-1, u.shape[1])


def _on_front(u: np.ndarray, front: np.ndarray, keys: _RowKeys) -> np.ndarray:
    if keys.ok:
        return np.isin(keys(u), keys(front))
    members = set(map(tuple, front.tolist()))
    return np.array([tuple(r) in members for r in u.tolist()], dtype=bool)


class _Best:
    """Running maximum with every tied index; chunks arrive in index order."""

    def __init__(self):
        self.key = None
        self.idx: list[np.ndarray] = []

    def offer(self, key, hits: np.ndarray):
        if self.key is None or key > self.key:
            self.key, self.idx = key, [hits]
        elif key == self.key:
            self.idx.append(hits)

    def offer_max(self, keys: np.ndarray, lo: int):
        top = keys.max()
        self.offer(top, np.flatnonzero(keys == top) + lo)

    def indices(self) -> np.ndarray:
        return np.sort(np.concatenate(self.idx)) if self.idx else np.empty(0, dtype=np.int64)


def enumerate_all(s: Scenario, cap: int | None = None, chunk: int | None = None) -> EnumerationResult:
    """Exhaustively evaluate every allocation of ``s``.

    Raises CapExceeded when ``n**m`` exceeds ``cap`` (default from
    :func:`fairalloc.enumeration.default_cap`). ``chunk`` only changes the
    work partitioning, never the result.
    """
    n, m = s.n, s.m
    cap = enumeration.default_cap() if cap is None else cap
    total = n**m
    if total > cap:
        raise CapExceeded(n, m, cap)
    values = s.ints
    row_peak = int(values.sum(axis=1).max())
    exact_products = row_peak**n >= 2**62 or values.dtype == object
    buyer = s.scenario_class.is_buyer
    keys = _RowKeys(values)

    # pass 1: welfare optima and the set of distinct utility vectors
    best_u, best_nash, best_support = _Best(), _Best(), _Best()
    uniques = []
    for lo, rows in enumeration.iter_chunks(n, m, size=chunk):
        u = enumeration.utility_vectors(values, rows)
        best_u.offer_max(u.sum(axis=1), lo)
        best_nash.offer_max(_products(u, exact_products), lo)
        support = (u > 0).sum(axis=1)
        widest = support.max()
        pos_prod = _products(np.where(u > 0, u, 1), exact_products)
        top = pos_prod[support == widest].max()
        best_support.offer((int(widest), int(top)),
                           np.flatnonzero((support == widest) & (pos_prod == top)) + lo)
        uniques.append(_unique_rows(u, keys))
    front = _nondominated(_unique_rows(np.concatenate(uniques), keys))

    msw_u_idx = best_u.indices()
    nash_idx = best_nash.indices()
    support_idx = best_support.indices()

    # pass 2: Pareto membership and fairness tallies
    counts = {name: 0 for name in PREDICATES + ("po",)}
    if buyer:
        counts["efx0_sufficient"] = 0
    po_parts, chain_bad, suff_bad = [], [], []
    tracked = {"msw_u": msw_u_idx, "msw_nash": nash_idx, "msw_nash_maximal_support": support_idx}
    set_flags: dict[str, dict[str, list]] = {k: {p: [] for p in PREDICATES + ("po",)} for k in tracked}
    for lo, rows in enumeration.iter_chunks(n, m, size=chunk):
        u = enumeration.utility_vectors(values, rows)
        po = _on_front(u, front, keys)
        flags = batch_envy_flags(values, rows, buyer=buyer)
        flags["po"] = po
        if buyer:
            # the sufficient condition is only stated for EFX allocations
            flags["efx0_sufficient"] &= flags["efx"]
        for name in counts:
            counts[name] += int(flags[name].sum())
        po_parts.append(np.flatnonzero(po) + lo)
        ef, efx0, efx, ef1 = (flags[p] for p in PREDICATES)
        broken = (ef & ~efx0) | (efx0 & ~efx) | (efx & ~ef1)
        chain_bad.append(np.flatnonzero(broken) + lo)
        if buyer:
            suff_bad.append(np.flatnonzero(flags["efx0_sufficient"] & ~efx0) + lo)
        hi = lo + len(rows)
        for key, idx in tracked.items():
            local = idx[(idx >= lo) & (idx < hi)] - lo
            for p in PREDICATES + ("po",):
                set_flags[key][p].append(flags[p][local])

    po_idx = np.concatenate(po_parts)
    counts["total"] = total
    counts["msw_u"] = len(msw_u_idx)
    counts["msw_nash"] = len(nash_idx)
    counts["msw_nash_maximal_support"] = len(support_idx)
    frozen_flags = {k: {p: np.concatenate(v) for p, v in d.items()} for k, d in set_flags.items()}

    ms_support, ms_value = best_support.key
    return EnumerationResult(
        scenario=s,
        total=total,
        msw_u_value=Fraction(int(best_u.key), s.scale),
        msw_u_set=_decode_all(msw_u_idx, n, m),
        msw_nash_value=Fraction(int(best_nash.key), s.scale**n),
        msw_nash_set=_decode_all(nash_idx, n, m),
        maximal_support_size=int(ms_support),
        maximal_support_value=Fraction(int(ms_value), s.scale**ms_support),
        msw_nash_maximal_support_set=_decode_all(support_idx, n, m),
        po_set=_decode_all(po_idx, n, m),
        counts=counts,
        set_flags=frozen_flags,
        chain_violations=_decode_all(np.concatenate(chain_bad), n, m),
        sufficient_violations=_decode_all(np.concatenate(suff_bad), n, m) if buyer else (),
        nash_not_po=_decode_all(nash_idx[~frozen_flags["msw_nash"]["po"]], n, m),
        support_not_po=_decode_all(support_idx[~frozen_flags["msw_nash_maximal_support"]["po"]], n, m),
    )


# ---------------------------------------------------------------------------
# theorem verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TheoremCheck:
    """One claim checked against enumerated ground truth.

    ``asserted`` claims are guaranteed results; a failing one is a bug.
    Non-asserted checks are observations recorded for inspection.
    """

    name: str
    applicable: bool
    holds: bool | None
    asserted: bool = True
    counterexample: Allocation | None = None
    note: str = ""

    @property
    def violated(self) -> bool:
        return self.asserted and self.applicable and self.holds is False


def _first_missing(candidates, members) -> Allocation | None:
    pool = set(members)
    for a in candidates:
        if a not in pool:
            return a
    return None


def _first_false(items, flags) -> Allocation | None:
    for a, ok in zip(items, flags):
        if not ok:
            return a
    return None


def verify_theorems(s: Scenario, r: EnumerationResult) -> list[TheoremCheck]:
    """Check every applicable claim for ``s`` against the enumeration ``r``."""
    if r.scenario != s:
        raise MismatchedInput("enumeration result was computed for a different scenario")
    buyer = s.scenario_class.is_buyer
    nash_positive = r.msw_nash_value > 0
    g = gamma(s, trace=False)[0]
    gs = gamma_star(s, trace=False)[0]
    msw_u = set(r.msw_u_set)
    checks: list[TheoremCheck] = []

    def add(name, applicable, holds=None, counterexample=None, asserted=True, note=""):
        if not applicable:
            holds = counterexample = None
        elif holds:
            counterexample = None
        checks.append(TheoremCheck(name, applicable, holds, asserted, counterexample, note))

    alpha_sum = sum(s.alphas(), Fraction(0))
    add("msw-u-value-equals-column-maxima", True, r.msw_u_value == alpha_sum,
        note=f"{r.msw_u_value} vs {alpha_sum}")
    add("gamma-in-msw-u", True, g in msw_u, None if g in msw_u else g)
    add("gamma-star-in-msw-u", True, gs in msw_u, None if gs in msw_u else gs)
    miss = _first_missing(r.msw_u_set, r.po_set)
    add("msw-u-implies-po", True, miss is None, miss)

    fl = r.set_flags["msw_nash"]
    bad = _first_false(r.msw_nash_set, fl["ef1"] & fl["po"])
    add("nash-optimal-ef1-po", nash_positive, bad is None, bad)
    fl = r.set_flags["msw_nash_maximal_support"]
    bad = _first_false(r.msw_nash_maximal_support_set, fl["ef1"] & fl["po"])
    add("maximal-support-nash-ef1-po", not nash_positive, bad is None, bad, asserted=False,
        note="zero-maximum tie rule among maximal supports is not pinned down")
    add("fairness-chain", True, not r.chain_violations,
        r.chain_violations[0] if r.chain_violations else None)

    po_eq = set(r.po_set) == msw_u
    po_cx = None if po_eq else (_first_missing(r.po_set, r.msw_u_set)
                                or _first_missing(r.msw_u_set, r.po_set))
    add("po-iff-msw-u", buyer, po_eq, po_cx)
    bad = _first_missing(r.msw_nash_set, r.msw_u_set)
    add("nash-optimal-in-msw-u", buyer and nash_positive, bad is None, bad)
    ef1_flags = r.set_flags["msw_u"]["ef1"]
    add("ef1-msw-u-exists", buyer, bool(ef1_flags.any()))
    add("gamma-ef1", buyer, bool(is_ef1(s, g)), g)
    add("gamma-star-efx", buyer, bool(is_efx(s, gs)), gs)
    add("efx0-sufficient-condition", buyer, not r.sufficient_violations,
        r.sufficient_violations[0] if r.sufficient_violations else None)

    bad = _first_false(r.msw_u_set, ef1_flags)
    add("every-msw-u-member-ef1", True, bad is None, bad, asserted=False,
        note="not guaranteed outside buyer scenarios")

    return checks


def violations(checks: list[TheoremCheck]) -> list[TheoremCheck]:
    return [c for c in checks if c.violated]
