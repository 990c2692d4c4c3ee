"""Exception hierarchy shared by all solvers."""


class HomologicalError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(HomologicalError, ValueError):
    """Input violates a structural invariant (partition, dimension, ...)."""


class NotMeanZero(HomologicalError, ValueError):
    def __init__(self, mean, message=None):
        self.mean = mean
        super().__init__(message or f"input is not mean zero (mean = {mean})")


class RowNotMeanZero(NotMeanZero):
    def __init__(self, row, mean):
        self.row = row
        super().__init__(mean, f"row {row} does not sum to zero (sum = {mean})")


class EmptyInput(HomologicalError, ValueError):
    pass


class TooLarge(HomologicalError, ValueError):
    pass


class DimensionTooLarge(TooLarge):
    pass


class UnequalIntervals(InvalidInstance):
    pass


class BreakpointHit(HomologicalError, ValueError):
    """An orbit point landed on a partition boundary (a mod-0 ambiguity)."""

    def __init__(self, point, step):
        self.point = point
        self.step = step
        super().__init__(f"orbit point {point} at step {step} lies on a breakpoint")


class ConvexHullViolation(HomologicalError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"0 is not in the convex hull of set {index}")


class BoundViolated(HomologicalError, AssertionError):
    """A constructed object failed its post-verification.

    Never a legitimate outcome: it signals a bug in a constructor.
    """


class SearchExhausted(HomologicalError, LookupError):
    pass
