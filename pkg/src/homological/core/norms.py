"""Norms on rational vectors with exact comparison semantics.

L1 and LINF norms of rational vectors are rational. The Euclidean norm is
generally irrational, so a norm value is carried as its *gauge*: the norm
itself for L1/LINF and the squared norm for L2. Comparisons against
rational thresholds then reduce to exact comparisons of gauges.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

from .vectors import RationalVector

# Absolute slack for comparisons against irrational thresholds.
FLOAT_TOLERANCE = 1e-9


def _isqrt_exact(x: Fraction):
    """Return sqrt(x) as a Fraction if it is rational, else None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


class NormValue:
    """A nonnegative real known exactly through ``gauge = value ** power``."""

    __slots__ = ("gauge", "power")

    def __init__(self, gauge, power: int = 1):
        gauge = Fraction(gauge)
        if gauge < 0:
            raise ValueError("norm values are nonnegative")
        if power not in (1, 2):
            raise ValueError("power must be 1 or 2")
        self.gauge = gauge
        self.power = power

    @classmethod
    def zero(cls, power: int = 1) -> "NormValue":
        return cls(Fraction(0), power)

    def exact(self):
        """The value as a Fraction, or None when it is irrational."""
        if self.power == 1:
            return self.gauge
        return _isqrt_exact(self.gauge)

    def __float__(self) -> float:
        if self.power == 1:
            return float(self.gauge)
        return math.sqrt(self.gauge)

    def _gauge_of(self, other):
        """Gauge of a rational ``other`` in this value's power, or None."""
        if isinstance(other, NormValue):
            if other.power == self.power:
                return other.gauge
            ex = other.exact()
            if ex is None:
                return None
            other = ex
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Fraction(other)
            if other < 0:
                return Fraction(-1)
            return other ** self.power
        return None

    def _cmp(self, other):
        g = self._gauge_of(other)
        if g is not None:
            return (self.gauge > g) - (self.gauge < g)
        if isinstance(other, (float, NormValue)):
            a, b = float(self), float(other)
            return (a > b) - (a < b)
        return NotImplemented

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __hash__(self):
        return hash((self.gauge, self.power))

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            c = abs(Fraction(c))
            return NormValue(self.gauge * c ** self.power, self.power)
        if isinstance(c, float):
            return float(self) * c
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return self * (1 / Fraction(c))
        if isinstance(c, float):
            return float(self) / c
        return NotImplemented

    def __bool__(self):
        return self.gauge != 0

    def approx(self) -> str:
        return f"{float(self):.12g}"

    def __str__(self):
        ex = self.exact()
        if ex is not None:
            return str(ex)
        return f"sqrt({self.gauge})"

    def __repr__(self):
        return f"NormValue({self})"

    def to_json(self) -> dict:
        ex = self.exact()
        doc = {"exact": None if ex is None else str(ex), "approx": self.approx()}
        if self.power == 2:
            doc["squared"] = str(self.gauge)
        return doc


def within(value, bound, tol: float = FLOAT_TOLERANCE) -> bool:
    """``value <= bound``; exact when ``bound`` is rational, else with slack ``tol``."""
    if isinstance(bound, (int, Fraction, NormValue)) and not isinstance(bound, bool):
        return value <= bound
    return float(value) <= float(bound) + tol


class Norm(enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, name) -> "Norm":
        if isinstance(name, Norm):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown norm {name!r}; expected l1, l2 or linf") from None

    @property
    def power(self) -> int:
        return 2 if self is Norm.L2 else 1

    def gauge(self, v: RationalVector) -> Fraction:
        e = v.entries if isinstance(v, RationalVector) else tuple(Fraction(a) for a in v)
        if not e:
            return Fraction(0)
        # integer numerators over a common denominator: one Fraction at the end
        den = math.lcm(*(a.denominator for a in e))
        nums = [abs(a.numerator) * (den // a.denominator) for a in e]
        if self is Norm.L1:
            return Fraction(sum(nums), den)
        if self is Norm.LINF:
            return Fraction(max(nums), den)
        return Fraction(sum(x * x for x in nums), den * den)

    def __call__(self, v: RationalVector) -> NormValue:
        return NormValue(self.gauge(v), self.power)

    def max_of(self, vectors) -> NormValue:
        """max_i ||v_i|| (zero for an empty family)."""
        g = max((self.gauge(v) for v in vectors), default=Fraction(0))
        return NormValue(g, self.power)

    def zero(self) -> NormValue:
        return NormValue.zero(self.power)

    def of(self, x) -> NormValue:
        """Wrap a known nonnegative rational as a NormValue in this norm."""
        x = Fraction(x)
        return NormValue(x ** self.power, self.power)
