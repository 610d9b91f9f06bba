class CyclicDiffError(Exception):
    """Base class for errors raised by this package."""


class DegenerateZero(CyclicDiffError, ValueError):
    """The state is identically zero and has no normalized shape."""


class StepsTooLarge(CyclicDiffError, ValueError):
    pass


class NotConjugateSymmetric(CyclicDiffError, ValueError):
    """Spectral coefficients do not come from a real vector."""


class WrongParity(CyclicDiffError, ValueError):
    pass


class DegenerateEllipse(CyclicDiffError, ValueError):
    """The cos/sin coefficient vectors are linearly dependent (AD - BC ~ 0)."""


class InsufficientSnapshots(CyclicDiffError, ValueError):
    pass


class RouteMismatch(CyclicDiffError, RuntimeError):
    """Two evaluation routes disagree; this always indicates a bug."""


class NoSuchSnapshot(CyclicDiffError, KeyError):
    pass
