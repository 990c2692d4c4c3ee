"""Exact substrate: rationals, norms, step functions, interval exchanges."""

from .functions import DiscreteFunction, StepFunction
from .iet import IntervalExchange, Piece, compose, orbit_partial_sums
from .norms import FLOAT_TOLERANCE, Norm, NormValue, within
from .vectors import RationalVector, as_rational, is_dyadic, vec, vector_sum


def mean(f: StepFunction) -> RationalVector:
    """Exact integral of a step function over [0,1)."""
    return f.mean()


__all__ = [
    "DiscreteFunction", "StepFunction", "IntervalExchange", "Piece", "compose",
    "orbit_partial_sums", "mean", "Norm", "NormValue", "within", "FLOAT_TOLERANCE",
    "RationalVector", "as_rational", "is_dyadic", "vec", "vector_sum",
]
