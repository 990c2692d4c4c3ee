"""Step functions on [0,1) and functions on finite sets, with values in Q^d."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import InvalidInstance
from .norms import Norm, NormValue
from .vectors import RationalVector, as_rational, common_dim, vector_sum


def _as_vector(v) -> RationalVector:
    return v if isinstance(v, RationalVector) else RationalVector(v)


@dataclass(frozen=True)
class StepFunction:
    """A function constant on each half-open interval [b_i, b_{i+1}).

    Adjacent equal values are kept as separate steps so that refinements stay
    predictable.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bp = tuple(as_rational(b) for b in self.breakpoints)
        vals = tuple(_as_vector(v) for v in self.values)
        if len(bp) != len(vals) + 1 or not vals:
            raise InvalidInstance("need len(breakpoints) == len(values) + 1 >= 2")
        if bp[0] != 0 or bp[-1] != 1:
            raise InvalidInstance("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bp, bp[1:])):
            raise InvalidInstance("breakpoints must be strictly increasing")
        try:
            common_dim(vals)
        except ValueError as exc:
            raise InvalidInstance(str(exc)) from None
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def equal_intervals(cls, values: Sequence) -> "StepFunction":
        n = len(values)
        return cls(tuple(Fraction(k, n) for k in range(n + 1)), tuple(values))

    @classmethod
    def constant(cls, v) -> "StepFunction":
        return cls((Fraction(0), Fraction(1)), (_as_vector(v),))

    @property
    def dim(self) -> int:
        return len(self.values[0])

    def __len__(self) -> int:
        return len(self.values)

    def intervals(self):
        """Yield (lo, hi, value) triples."""
        bp = self.breakpoints
        for i, v in enumerate(self.values):
            yield bp[i], bp[i + 1], v

    def lengths(self) -> list:
        bp = self.breakpoints
        return [bp[i + 1] - bp[i] for i in range(len(self.values))]

    def __call__(self, t) -> RationalVector:
        t = as_rational(t)
        if not 0 <= t < 1:
            raise ValueError(f"{t} is outside [0,1)")
        return self.values[bisect_right(self.breakpoints, t) - 1]

    def mean(self) -> RationalVector:
        return vector_sum([v * length for v, length in zip(self.values, self.lengths())])

    def essential_values(self) -> list:
        """Distinct values in order of first appearance."""
        return list(dict.fromkeys(self.values))

    def sup_norm(self, norm: Norm) -> NormValue:
        return norm.max_of(self.values)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def refine(self, points: Iterable) -> "StepFunction":
        """Same function with extra breakpoints inserted."""
        extra = {as_rational(p) for p in points}
        bp = sorted(set(self.breakpoints) | {p for p in extra if 0 < p < 1})
        return StepFunction(tuple(bp), tuple(self(a) for a in bp[:-1]))

    def _combine(self, other: "StepFunction", op) -> "StepFunction":
        bp = sorted(set(self.breakpoints) | set(other.breakpoints))
        return StepFunction(tuple(bp), tuple(op(self(a), other(a)) for a in bp[:-1]))

    def __add__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return StepFunction(self.breakpoints, tuple(-v for v in self.values))

    def scale(self, c) -> "StepFunction":
        return StepFunction(self.breakpoints, tuple(v * c for v in self.values))

    def sup_norm_on(self, norm: Norm, region: Sequence[tuple]) -> NormValue:
        """Essential sup of the norm over a finite union of intervals [lo, hi)."""
        best = norm.zero()
        for lo, hi, v in self.intervals():
            for a, b in region:
                if max(lo, as_rational(a)) < min(hi, as_rational(b)):
                    nv = norm(v)
                    if nv > best:
                        best = nv
                    break
        return best

    def has_equal_intervals(self) -> bool:
        n = len(self.values)
        return all(b == Fraction(k, n) for k, b in enumerate(self.breakpoints))


@dataclass(frozen=True)
class DiscreteFunction:
    """A V-valued function on {0, ..., n-1} with counting measure."""

    values: tuple

    def __post_init__(self):
        vals = tuple(_as_vector(v) for v in self.values)
        if not vals:
            raise InvalidInstance("a discrete function needs n >= 1 points")
        try:
            common_dim(vals)
        except ValueError as exc:
            raise InvalidInstance(str(exc)) from None
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def dim(self) -> int:
        return len(self.values[0])

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i) -> RationalVector:
        return self.values[i]

    def total(self) -> RationalVector:
        return vector_sum(list(self.values))

    def sup_norm(self, norm: Norm) -> NormValue:
        return norm.max_of(self.values)
