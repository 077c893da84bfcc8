import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from fairalloc import Allocation, read_scenario  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture
def buyer_3x5():
    """Three agents, five resources, buyer valuations with prices 500 200 50 100 250."""
    return read_scenario(FIXTURES / "example_buyer_3x5.txt")


@pytest.fixture
def general_2x2():
    return read_scenario(FIXTURES / "example_general_2x2.txt")


@pytest.fixture
def general_5x5():
    return read_scenario(FIXTURES / "example_general_5x5.txt")


@pytest.fixture
def counterexample_3x8():
    return read_scenario(FIXTURES / "counterexample_3x8.txt")


def alloc(*agents: int) -> Allocation:
    return Allocation(tuple(agents))
