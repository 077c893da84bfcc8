"""Exact fair-division toolkit for indivisible goods with additive valuations.

Scenarios are utility matrices (agents by resources) held as exact
rationals. The package provides the greedy welfare-maximizing allocators,
fairness and efficiency predicates, an exhaustive enumeration oracle for
small instances, seeded scenario generators and a command line front end.
"""
from .allocators import (
    ALLOCATORS,
    AllocatorTrace,
    TraceStep,
    alg_identical,
    buyer_identical,
    gamma,
    gamma_star,
    processing_order,
)
from .checkers import (
    FairnessReport,
    Status,
    Verdict,
    WelfareReport,
    check_fairness,
    efx0_sufficient_condition,
    in_msw_nash,
    in_msw_u,
    is_ef,
    is_ef1,
    is_efx,
    is_efx0,
    is_po,
    shared_goods,
    welfare,
)
from .errors import (
    CapExceeded,
    DimensionMismatch,
    EmptyDimension,
    FairAllocError,
    IndexOutOfRange,
    InvalidSpec,
    MismatchedInput,
    NegativeUtility,
    NotIdenticalScenario,
    ParseError,
    PreconditionViolated,
)
from .generators import GenSpec, generate
from .model import (
    Allocation,
    Scenario,
    ScenarioClass,
    bundle_utility,
    classify_scenario,
    format_allocation,
    format_scenario,
    parse_allocation,
    parse_scenario,
    read_allocation,
    read_scenario,
    validate_scenario,
    write_allocation,
    write_scenario,
)
from .oracle import EnumerationResult, TheoremCheck, enumerate_all, verify_theorems

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
