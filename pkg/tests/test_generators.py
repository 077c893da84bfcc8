from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairalloc import EmptyDimension, GenSpec, InvalidSpec, ScenarioClass, generate


@given(st.integers(2, 5), st.integers(1, 8), st.sampled_from(list(ScenarioClass)), st.integers(0, 2**64 - 1))
def test_class_and_determinism(n, m, cls, seed):
    spec = GenSpec(n, m, cls, seed=seed, price_range=(1, 50))
    s = generate(spec)
    assert s.scenario_class is cls
    assert (s.n, s.m) == (n, m)
    assert generate(spec) == s
    assert s.ints.max() <= 50


def test_values_in_range_and_columns_nonzero():
    s = generate(GenSpec(4, 200, ScenarioClass.BUYER, price_range=(7, 9), seed=3))
    v = s.ints
    assert set(np.unique(v)) <= {0, 7, 8, 9}
    assert (v.max(axis=0) > 0).all()


def test_zero_probability_is_respected():
    s = generate(GenSpec(4, 2000, ScenarioClass.BUYER, zero_probability=Fraction(1, 4), seed=11))
    share = (s.ints == 0).mean()
    assert 0.2 < share < 0.3


def test_general_can_have_zeros():
    s = generate(GenSpec(3, 300, ScenarioClass.GENERAL, zero_probability="1/3", seed=5))
    assert (s.ints == 0).any() and s.scenario_class is ScenarioClass.GENERAL


def test_identical_row_is_the_first_draws():
    s = generate(GenSpec(3, 6, ScenarioClass.IDENTICAL, price_range=(1, 100), seed=42))
    row = np.random.Generator(np.random.PCG64(42)).integers(1, 101, size=6)
    assert np.array_equal(s.ints, np.broadcast_to(row, (3, 6)))


def test_seeds_differ():
    a = generate(GenSpec(3, 6, seed=1))
    b = generate(GenSpec(3, 6, seed=2))
    assert a != b


def test_defaults():
    assert GenSpec(2, 2).zero_probability == Fraction(1, 2)
    assert GenSpec(2, 2, "general").zero_probability == 0
    assert GenSpec(2, 2, "identical").scenario_class is ScenarioClass.IDENTICAL


@pytest.mark.parametrize("kwargs", [
    dict(n=2, m=2, price_range=(0, 5)),
    dict(n=2, m=2, price_range=(6, 5)),
    dict(n=2, m=2, zero_probability=1),
    dict(n=2, m=2, zero_probability=-0.1),
    dict(n=2, m=2, seed=-1),
    dict(n=2, m=2, seed=2**64),
    dict(n=2, m=2, scenario_class="identical", zero_probability=0.3),
    dict(n=1, m=2, scenario_class="buyer"),
    dict(n=2, m=2, scenario_class="buyer", zero_probability=0),
    dict(n=2, m=2, scenario_class="general", price_range=(4, 4)),
])
def test_invalid_specs(kwargs):
    with pytest.raises(InvalidSpec) as info:
        generate(GenSpec(**kwargs))
    assert str(info.value).startswith("InvalidSpec")


@pytest.mark.parametrize("n, m", [(0, 3), (3, 0)])
def test_empty_dimension(n, m):
    with pytest.raises(EmptyDimension):
        generate(GenSpec(n, m))


def test_to_args():
    args = GenSpec(3, 4, "buyer", (2, 9), "1/4", 17).to_args()
    assert args == ["--n", "3", "--m", "4", "--class", "buyer", "--price-min", "2", "--price-max", "9",
                    "--zero-prob", "0.25", "--seed", "17"]
