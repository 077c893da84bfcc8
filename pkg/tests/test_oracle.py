import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import naive
from fairalloc import (
    CapExceeded,
    MismatchedInput,
    Scenario,
    enumerate_all,
    gamma,
    is_ef1,
    is_po,
    validate_scenario,
    verify_theorems,
)
from fairalloc.enumeration import CAP_ENV_VAR, allocation_count, decode, default_cap, iter_chunks
from fairalloc.oracle import violations

from conftest import alloc
from strategies import buyer_matrices, general_matrices


def assignments(items):
    return [a.assignment for a in items]


def by_name(checks):
    return {c.name: c for c in checks}


# ---------------------------------------------------------------------------
# enumeration order and chunking
# ---------------------------------------------------------------------------

def test_decode_is_lexicographic():
    rows = decode(np.arange(allocation_count(3, 2)), 3, 2) + 1
    assert [tuple(r) for r in rows] == naive.allocations(3, 2)


@pytest.mark.parametrize("size", [1, 2, 5, 64])
def test_chunks_cover_everything(size):
    seen = np.concatenate([rows for _, rows in iter_chunks(3, 3, size=size)])
    assert np.array_equal(seen, decode(np.arange(27), 3, 3))


def test_cap_from_environment(monkeypatch, buyer_3x5):
    monkeypatch.setenv(CAP_ENV_VAR, "100")
    assert default_cap() == 100
    with pytest.raises(CapExceeded):
        enumerate_all(buyer_3x5)
    assert enumerate_all(buyer_3x5, cap=243).total == 243


# ---------------------------------------------------------------------------
# agreement with the reference enumeration
# ---------------------------------------------------------------------------

def check_against_reference(matrix, chunk=None):
    s = validate_scenario(matrix)
    ref = naive.Oracle(matrix)
    r = enumerate_all(s, chunk=chunk)
    assert r.total == len(ref.all)
    assert r.msw_u_value == ref.msw_u_value
    assert assignments(r.msw_u_set) == ref.msw_u_set
    assert r.msw_nash_value == ref.msw_nash_value
    assert assignments(r.msw_nash_set) == ref.msw_nash_set
    assert assignments(r.po_set) == ref.po_set
    rows = ref.rows
    for name, fn in (("ef", naive.ef), ("ef1", naive.ef1), ("efx", naive.efx), ("efx0", naive.efx0)):
        assert r.counts[name] == sum(fn(rows, a) for a in ref.all)
    assert r.counts["po"] == len(ref.po_set)
    for key, members in (("msw_u", r.msw_u_set), ("msw_nash", r.msw_nash_set)):
        assert list(r.set_flags[key]["ef1"]) == [naive.ef1(rows, a.assignment) for a in members]
        assert list(r.set_flags[key]["po"]) == [ref.is_po(a.assignment) for a in members]
    # maximal support: most agents with positive utility, then the largest product over them
    supp = {a: sum(1 for x in ref.util[a] if x > 0) for a in ref.all}
    widest = max(supp.values())
    prod = {a: math.prod(x for x in ref.util[a] if x > 0) for a in ref.all if supp[a] == widest}
    assert r.maximal_support_size == widest
    assert r.maximal_support_value == max(prod.values())
    assert assignments(r.msw_nash_maximal_support_set) == [a for a in prod if prod[a] == max(prod.values())]
    assert not r.chain_violations
    return r


@given(general_matrices(max_n=3, max_m=4, max_value=5))
def test_general_matches_reference(matrix):
    check_against_reference(matrix)


@given(buyer_matrices(max_n=3, max_m=4))
def test_buyer_matches_reference(matrix):
    check_against_reference(matrix)


@given(general_matrices(max_n=3, max_m=4, max_value=5), st.integers(1, 9))
def test_chunk_size_does_not_matter(matrix, chunk):
    s = Scenario.from_integers(matrix)
    a, b = enumerate_all(s), enumerate_all(s, chunk=chunk)
    for field in ("msw_u_set", "msw_nash_set", "po_set", "msw_nash_maximal_support_set", "counts"):
        assert getattr(a, field) == getattr(b, field)


def test_rational_and_huge_values():
    check_against_reference([["1/3", "1/2", 0], ["1/4", "2/3", "5/7"]])
    big = 10**20
    check_against_reference([[big, 1, big], [big - 1, 2, 3], [0, big, 1]])


def test_po_brute_agrees_with_po_set(general_5x5):
    r = enumerate_all(general_5x5)
    members = set(r.po_set)
    for assignment in [(1, 2, 5, 4, 1), (1, 2, 5, 4, 3), (1, 1, 1, 1, 1), (2, 3, 4, 5, 1)]:
        a = alloc(*assignment)
        assert is_po(general_5x5, a, mode="brute").ok == (a in members)


# ---------------------------------------------------------------------------
# published examples
# ---------------------------------------------------------------------------

def test_buyer_3x5_ground_truth(buyer_3x5):
    r = enumerate_all(buyer_3x5)
    assert r.total == 243
    assert r.msw_u_value == 1100
    assert r.msw_nash_value == 45_000_000
    assert r.msw_nash_set == (alloc(1, 3, 2, 3, 2),)
    assert gamma(buyer_3x5)[0] in r.msw_u_set
    assert set(r.po_set) == set(r.msw_u_set)
    assert not violations(verify_theorems(buyer_3x5, r))


def test_general_2x2_ground_truth(general_2x2):
    r = enumerate_all(general_2x2)
    assert r.msw_u_set == (alloc(1, 1),)
    assert r.msw_nash_value == 30
    assert r.msw_nash_set == (alloc(2, 1),)
    assert is_ef1(general_2x2, alloc(2, 1)).ok
    checks = by_name(verify_theorems(general_2x2, r))
    assert not violations(checks.values())
    every = checks["every-msw-u-member-ef1"]
    assert every.holds is False and not every.asserted
    assert every.counterexample == alloc(1, 1)
    assert not checks["po-iff-msw-u"].applicable


def test_general_5x5_ground_truth(general_5x5):
    r = enumerate_all(general_5x5)
    assert r.msw_u_value == 50
    assert r.msw_nash_value == 50000
    assert alloc(1, 2, 5, 4, 3) in r.msw_nash_set
    assert alloc(1, 2, 5, 4, 1) in r.msw_u_set
    assert not all(r.set_flags["msw_u"]["ef1"])


def test_counterexample_ground_truth(counterexample_3x8):
    r = enumerate_all(counterexample_3x8)
    ref = naive.Oracle([[20, 0, 10, 2, 0, 0, 3, 1], [20, 0, 10, 2, 11, 19, 0, 1], [20, 9, 0, 2, 0, 19, 3, 1]])
    assert r.msw_nash_value == ref.msw_nash_value
    assert r.msw_u_value == 75
    checks = by_name(verify_theorems(counterexample_3x8, r))
    assert checks["gamma-star-efx"].holds
    assert not violations(checks.values())


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------

def test_zero_nash_uses_maximal_support():
    s = Scenario.from_integers([[3, 1], [0, 0], [2, 2]])
    r = enumerate_all(s)
    assert r.msw_nash_value == 0
    assert r.maximal_support_size == 2
    assert r.maximal_support_value == 6
    checks = by_name(verify_theorems(s, r))
    assert not checks["nash-optimal-ef1-po"].applicable
    assert checks["maximal-support-nash-ef1-po"].applicable


def test_mismatched_input(buyer_3x5, general_2x2):
    with pytest.raises(MismatchedInput):
        verify_theorems(general_2x2, enumerate_all(buyer_3x5))


@given(buyer_matrices(max_n=4, max_m=4, max_price=20))
def test_buyer_theorems_hold(matrix):
    s = Scenario.from_integers(matrix)
    assert not violations(verify_theorems(s, enumerate_all(s)))


@given(general_matrices(max_n=3, max_m=4, max_value=8))
def test_general_theorems_hold(matrix):
    s = Scenario.from_integers(matrix)
    assert not violations(verify_theorems(s, enumerate_all(s)))
