from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import naive
from fairalloc import (
    NotIdenticalScenario,
    Scenario,
    alg_identical,
    buyer_identical,
    gamma,
    gamma_star,
    processing_order,
    validate_scenario,
)
from fairalloc.allocators import ALLOCATORS

from conftest import alloc
from strategies import buyer_matrices, general_matrices


def reference_greedy(matrix, order):
    """Textbook greedy over Fractions: top valuers, then least served, then lowest index."""
    rows = naive.as_rows(matrix)
    n, m = len(rows), len(rows[0])
    partial = [Fraction(0)] * n
    owner = [0] * m
    for k in order:
        alpha = max(rows[i][k] for i in range(n))
        cands = [i for i in range(n) if rows[i][k] == alpha]
        low = min(partial[i] for i in cands)
        j = min(i for i in cands if partial[i] == low)
        owner[k] = j + 1
        partial[j] += rows[j][k]
    return tuple(owner)


def reference_order(matrix):
    alphas = [max(col) for col in zip(*naive.as_rows(matrix))]
    return sorted(range(len(alphas)), key=lambda k: (-alphas[k], k))


class TestGammaGoldens:
    def test_buyer_3x5(self, buyer_3x5):
        a, trace = gamma(buyer_3x5)
        assert a == alloc(1, 3, 2, 2, 2)
        assert trace.steps[-1].partial == (500, 400, 200)
        assert [st.chosen for st in trace] == [1, 3, 2, 2, 2]
        assert trace.steps[0].candidates == (1, 2, 3)

    def test_general_2x2(self, general_2x2):
        assert gamma(general_2x2)[0] == alloc(1, 1)

    def test_gamma_star_counterexample(self, counterexample_3x8):
        a, trace = gamma_star(counterexample_3x8)
        assert a == alloc(1, 3, 1, 3, 2, 2, 3, 3)
        assert trace.steps[-1].partial == (30, 30, 15)
        assert processing_order(counterexample_3x8) == (1, 6, 5, 3, 2, 7, 4, 8)

    def test_gamma_star_buyer_3x5(self, buyer_3x5):
        assert gamma_star(buyer_3x5)[0] == alloc(1, 3, 2, 3, 2)

    def test_zero_column_goes_to_least_served(self):
        s = Scenario.from_integers([[5, 0], [1, 0]])
        a, trace = gamma(s)
        assert a == alloc(1, 2)
        assert trace.steps[1].candidates == (1, 2)
        assert trace.steps[1].alpha == 0


class TestGammaProperties:
    @given(general_matrices(max_value=3))
    def test_matches_reference(self, matrix):
        s = Scenario.from_integers(matrix)
        assert gamma(s)[0].assignment == reference_greedy(matrix, range(len(matrix[0])))
        assert gamma_star(s)[0].assignment == reference_greedy(matrix, reference_order(matrix))

    @given(general_matrices(max_value=5))
    def test_reaches_column_maxima(self, matrix):
        s = Scenario.from_integers(matrix)
        alpha_sum = sum(max(c) for c in zip(*matrix))
        for fn in (gamma, gamma_star):
            a = fn(s, trace=False)[0]
            assert sum(naive.utilities(naive.as_rows(matrix), a.assignment)) == alpha_sum

    @given(general_matrices(max_value=4))
    def test_trace_invariants(self, matrix):
        s = Scenario.from_integers(matrix)
        a, trace = gamma(s)
        partial = [Fraction(0)] * s.n
        assert len(trace) == s.m
        for step in trace:
            k = step.resource
            assert step.alpha == max(s.value(i, k) for i in range(1, s.n + 1))
            assert set(step.minimizers) <= set(step.candidates)
            assert step.chosen == min(step.minimizers)
            assert all(s.value(i, k) == step.alpha for i in step.candidates)
            assert len({partial[i - 1] for i in step.minimizers}) == 1
            assert all(partial[i - 1] >= partial[step.minimizers[0] - 1] for i in step.candidates)
            partial[step.chosen - 1] += step.alpha
            assert step.partial == tuple(partial)
            assert a.assignment[k - 1] == step.chosen

    @given(general_matrices(max_value=6), st.integers(1, 50))
    def test_scale_invariant(self, matrix, c):
        s = Scenario.from_integers(matrix)
        scaled = validate_scenario([[Fraction(v, c) for v in row] for row in matrix])
        assert gamma(s)[0] == gamma(scaled)[0]
        assert gamma_star(s)[0] == gamma_star(scaled)[0]

    @given(buyer_matrices())
    def test_without_trace_is_same(self, matrix):
        s = Scenario.from_integers(matrix)
        a, t = gamma(s, trace=False)
        assert t is None and a == gamma(s)[0]

    def test_object_dtype_values(self):
        big = 10**25
        s = validate_scenario([[big, 1, big + 1], [big, 2, 0]])
        assert gamma(s)[0] == alloc(1, 2, 1)
        # r3 is processed first, so agent 2 is less served when the tied r1 arrives
        assert gamma_star(s)[0] == alloc(2, 2, 1)
        assert processing_order(s) == (3, 1, 2)


def identical(row, n):
    return Scenario.from_integers([list(row)] * n)


class TestIdentical:
    def test_rejects_non_identical(self, buyer_3x5):
        with pytest.raises(NotIdenticalScenario):
            alg_identical(buyer_3x5)
        with pytest.raises(NotIdenticalScenario):
            buyer_identical(buyer_3x5)

    def test_small_by_hand(self):
        s = identical([1, 5, 3, 4], 2)
        # sorted 5 4 3 1: agent1 5, agent2 4, agent2 3 -> 7, agent1 1 -> 6
        assert alg_identical(s) == alloc(1, 1, 2, 2)
        # index order 1 5 3 4: a1 1, a2 5, a1 3 -> 4, a1 4 -> 8
        assert buyer_identical(s) == alloc(1, 2, 1, 1)

    @given(st.lists(st.integers(1, 20), min_size=1, max_size=5), st.integers(1, 3))
    def test_alg_identical_is_efx(self, row, n):
        s = identical(row, n)
        a = alg_identical(s)
        assert naive.efx(naive.as_rows([row] * n), a.assignment)

    @given(st.lists(st.integers(1, 20), min_size=1, max_size=6), st.integers(1, 4))
    def test_buyer_identical_is_ef1(self, row, n):
        a = buyer_identical(identical(row, n))
        assert naive.ef1(naive.as_rows([row] * n), a.assignment)

    @given(st.lists(st.integers(1, 20), min_size=1, max_size=6), st.integers(1, 4))
    def test_alg_identical_is_buyer_identical_after_sorting(self, row, n):
        order = sorted(range(len(row)), key=lambda k: (-row[k], k))
        sorted_alloc = buyer_identical(identical([row[k] for k in order], n))
        expected = [0] * len(row)
        for pos, k in enumerate(order):
            expected[k] = sorted_alloc.assignment[pos]
        assert alg_identical(identical(row, n)).assignment == tuple(expected)

    def test_broadcast_input(self):
        row = np.arange(1, 7)
        s = Scenario.from_integers(np.broadcast_to(row, (3, 6)))
        assert alg_identical(s) == alg_identical(identical(row.tolist(), 3))

    def test_registry(self, buyer_3x5):
        assert set(ALLOCATORS) == {"gamma", "gamma-star", "alg-identical", "buyer-identical"}
        assert ALLOCATORS["gamma"](buyer_3x5) == gamma(buyer_3x5)[0]
