"""Seeded random scenarios.

Contract (fixtures depend on it): one ``numpy.random.Generator(PCG64(seed))``
stream per scenario, consumed column by column. For each resource the
generator draws, in order:

* buyer: one price from ``price_range``, then ``n`` uniforms deciding which
  agents value it at zero (redrawn while the column is all zero);
* general: ``n`` independent prices, then ``n`` zero-deciding uniforms
  (redrawn while the column is all zero);
* identical: one price per resource; the single row is shared by all agents.

If the finished matrix lands in a more specific class than requested (a
buyer draw with no zeros, a general draw whose columns happen to be
uniform) the whole matrix is redrawn from the same stream.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyDimension, InvalidSpec
from .model import Scenario, ScenarioClass, classify_scenario, format_rational, to_fraction

MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    scenario_class: ScenarioClass = ScenarioClass.BUYER
    price_range: tuple[int, int] = (1, 1000)
    # None picks 1/2 for buyer and 0 otherwise
    zero_probability: Fraction | None = None
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.scenario_class, str):
            object.__setattr__(self, "scenario_class", ScenarioClass(self.scenario_class))
        zp = self.zero_probability
        if zp is None:
            zp = Fraction(1, 2) if self.scenario_class is ScenarioClass.BUYER else Fraction(0)
        object.__setattr__(self, "zero_probability", to_fraction(zp))
        object.__setattr__(self, "price_range", tuple(int(x) for x in self.price_range))

    def validate(self) -> None:
        if self.n < 1 or self.m < 1:
            raise EmptyDimension(self.n, self.m)
        lo, hi = self.price_range
        if not 1 <= lo <= hi:
            raise InvalidSpec(f"InvalidSpec: price range must satisfy 1 <= low <= high, got {lo}..{hi}")
        if not 0 <= self.zero_probability < 1:
            raise InvalidSpec(f"InvalidSpec: zero probability must lie in [0, 1), got {self.zero_probability}")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("InvalidSpec: seed must be a 64-bit unsigned integer")
        cls = self.scenario_class
        if cls is ScenarioClass.IDENTICAL and self.zero_probability != 0:
            raise InvalidSpec("InvalidSpec: identical scenarios cannot contain zero valuations")
        if cls is ScenarioClass.BUYER and (self.n < 2 or self.zero_probability == 0):
            raise InvalidSpec("InvalidSpec: a buyer (non-identical) scenario needs n >= 2 and a "
                              "positive zero probability")
        if cls is ScenarioClass.GENERAL and (self.n < 2 or lo == hi):
            raise InvalidSpec("InvalidSpec: a general scenario needs n >= 2 and a price range "
                              "with at least two values")

    def to_args(self) -> list[str]:
        """Flags accepted by ``fairalloc gen``."""
        lo, hi = self.price_range
        return ["--n", str(self.n), "--m", str(self.m), "--class", self.scenario_class.value,
                "--price-min", str(lo), "--price-max", str(hi),
                "--zero-prob", format_rational(self.zero_probability), "--seed", str(self.seed)]


def _draw_buyer(rng, n, m, lo, hi, zp):
    out = np.empty((n, m), dtype=np.int64)
    for k in range(m):
        price = rng.integers(lo, hi + 1)
        while True:
            keep = rng.random(n) >= zp
            if keep.any():
                break
        out[:, k] = np.where(keep, price, 0)
    return out


def _draw_general(rng, n, m, lo, hi, zp):
    out = np.empty((n, m), dtype=np.int64)
    for k in range(m):
        col = rng.integers(lo, hi + 1, size=n)
        while True:
            keep = rng.random(n) >= zp
            if keep.any():
                break
        out[:, k] = np.where(keep, col, 0)
    return out


def generate(spec: GenSpec) -> Scenario:
    """Draw one scenario of class ``spec.scenario_class``. Deterministic in ``spec``."""
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, m = spec.n, spec.m
    lo, hi = spec.price_range
    zp = float(spec.zero_probability)
    label = f"{spec.scenario_class.value} n={n} m={m} seed={spec.seed}"
    if spec.scenario_class is ScenarioClass.IDENTICAL:
        row = rng.integers(lo, hi + 1, size=m, dtype=np.int64)
        return Scenario.from_integers(np.broadcast_to(row, (n, m)), label=label)
    draw = _draw_buyer if spec.scenario_class is ScenarioClass.BUYER else _draw_general
    for _ in range(MAX_ATTEMPTS):
        s = Scenario.from_integers(draw(rng, n, m, lo, hi, zp), label=label)
        if classify_scenario(s) is spec.scenario_class:
            return s
    raise InvalidSpec(f"InvalidSpec: no {spec.scenario_class.value} scenario after {MAX_ATTEMPTS} draws")
