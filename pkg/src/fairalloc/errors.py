"""Exception hierarchy shared by every module of the package."""


class FairAllocError(Exception):
    """Base class for all errors raised by fairalloc."""


class NegativeUtility(FairAllocError, ValueError):
    """A valuation cell is negative. ``agent`` and ``resource`` are 1-based."""

    def __init__(self, agent: int, resource: int, value=None):
        self.agent = agent
        self.resource = resource
        self.value = value
        super().__init__(f"NegativeUtility: u_{agent}(r_{resource}) = {value} < 0")


class EmptyDimension(FairAllocError, ValueError):
    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        super().__init__(f"EmptyDimension: need n >= 1 and m >= 1, got n={n}, m={m}")


class DimensionMismatch(FairAllocError, ValueError):
    pass


class IndexOutOfRange(FairAllocError, IndexError):
    pass


class ParseError(FairAllocError, ValueError):
    pass


class NotIdenticalScenario(FairAllocError, ValueError):
    pass


class PreconditionViolated(FairAllocError, ValueError):
    pass


class CapExceeded(FairAllocError, RuntimeError):
    def __init__(self, n: int, m: int, cap: int):
        self.n = n
        self.m = m
        self.cap = cap
        super().__init__(f"CapExceeded: {n}^{m} allocations exceeds the enumeration cap {cap}")


class InvalidSpec(FairAllocError, ValueError):
    pass


class MismatchedInput(FairAllocError, ValueError):
    pass
