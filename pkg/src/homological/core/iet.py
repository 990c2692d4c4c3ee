"""Interval exchange transformations of [0,1) with rational data."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import BreakpointHit, InvalidInstance
from .functions import StepFunction
from .vectors import as_rational


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    shift: Fraction

    @property
    def image(self) -> tuple:
        return self.lo + self.shift, self.hi + self.shift


def _check_partition(intervals, what):
    intervals = sorted(intervals)
    if not intervals or intervals[0][0] != 0 or intervals[-1][1] != 1:
        raise InvalidInstance(f"{what} intervals do not cover [0,1)")
    for (a, b), (c, _) in zip(intervals, intervals[1:]):
        if b != c:
            raise InvalidInstance(f"{what} intervals overlap or leave a gap at {b}")


@dataclass(frozen=True)
class IntervalExchange:
    """Piecewise translation of [0,1), bijective on half-open intervals.

    Pieces are stored sorted by left endpoint. Construction checks exactly that
    both the sources and the images partition [0,1).
    """

    pieces: tuple

    def __post_init__(self):
        ps = []
        for p in self.pieces:
            if not isinstance(p, Piece):
                lo, hi, shift = p
                p = Piece(as_rational(lo), as_rational(hi), as_rational(shift))
            if p.lo >= p.hi:
                raise InvalidInstance(f"empty piece [{p.lo}, {p.hi})")
            ps.append(p)
        ps.sort(key=lambda p: p.lo)
        _check_partition([(p.lo, p.hi) for p in ps], "source")
        _check_partition([p.image for p in ps], "image")
        object.__setattr__(self, "pieces", tuple(ps))
        object.__setattr__(self, "_starts", tuple(p.lo for p in ps))

    @classmethod
    def identity(cls) -> "IntervalExchange":
        return cls((Piece(Fraction(0), Fraction(1), Fraction(0)),))

    @classmethod
    def from_permutation(cls, sigma: Sequence[int]) -> "IntervalExchange":
        """Send [k/n, (k+1)/n) onto [sigma[k]/n, (sigma[k]+1)/n) by translation."""
        n = len(sigma)
        if sorted(sigma) != list(range(n)):
            raise InvalidInstance("sigma is not a permutation of 0..n-1")
        return cls(tuple(Piece(Fraction(k, n), Fraction(k + 1, n), Fraction(sigma[k] - k, n))
                         for k in range(n)))

    @classmethod
    def rotation(cls, alpha) -> "IntervalExchange":
        """t -> t + alpha mod 1 for rational 0 <= alpha < 1."""
        alpha = as_rational(alpha)
        if not 0 <= alpha < 1:
            raise InvalidInstance("rotation angle must lie in [0,1)")
        if alpha == 0:
            return cls.identity()
        return cls((Piece(Fraction(0), 1 - alpha, alpha), Piece(1 - alpha, Fraction(1), alpha - 1)))

    def breakpoints(self) -> tuple:
        return self._starts + (Fraction(1),)

    def _piece_at(self, t: Fraction) -> Piece:
        return self.pieces[bisect_right(self._starts, t) - 1]

    def __call__(self, t) -> Fraction:
        t = as_rational(t)
        if not 0 <= t < 1:
            raise ValueError(f"{t} is outside [0,1)")
        return t + self._piece_at(t).shift

    def inverse(self) -> "IntervalExchange":
        return IntervalExchange(tuple(Piece(p.lo + p.shift, p.hi + p.shift, -p.shift)
                                      for p in self.pieces))

    def then(self, other: "IntervalExchange") -> "IntervalExchange":
        """The map t -> other(self(t))."""
        out = []
        for p in self.pieces:
            a, b = p.image
            for q in other.pieces:
                lo, hi = max(a, q.lo), min(b, q.hi)
                if lo < hi:
                    out.append(Piece(lo - p.shift, hi - p.shift, p.shift + q.shift))
        return IntervalExchange(tuple(out))

    def __matmul__(self, other: "IntervalExchange") -> "IntervalExchange":
        """Composition ``self @ other`` = self after other."""
        return other.then(self)

    def power(self, k: int) -> "IntervalExchange":
        base = self if k >= 0 else self.inverse()
        out = IntervalExchange.identity()
        for _ in range(abs(k)):
            out = out.then(base)
        return out

    def total_length(self) -> Fraction:
        return sum((p.hi - p.lo for p in self.pieces), Fraction(0))

    def is_identity(self) -> bool:
        return all(p.shift == 0 for p in self.pieces)


def compose(f: StepFunction, T: IntervalExchange) -> StepFunction:
    """The step function t -> f(T(t)).

    f's partition is pulled back through each piece of T, so the result's
    breakpoints are T's breakpoints plus preimages of f's breakpoints.
    """
    bp, vals = f.breakpoints, f.values
    cells = []
    for p in T.pieces:
        a, b = p.image
        i = bisect_right(bp, a) - 1
        while i < len(vals) and bp[i] < b:
            x, y = max(a, bp[i]), min(b, bp[i + 1])
            cells.append((x - p.shift, y - p.shift, vals[i]))
            i += 1
    cells.sort(key=lambda c: c[0])
    bp = tuple(c[0] for c in cells) + (Fraction(1),)
    return StepFunction(bp, tuple(c[2] for c in cells))


def orbit_partial_sums(f: StepFunction, T: IntervalExchange, t, k_max: int) -> list:
    """[sum_{j<=k} f(T^j t) for k = 0..k_max], refusing breakpoint hits.

    A point on any breakpoint of f or T is ambiguous mod 0, so it raises
    BreakpointHit instead of picking a side.
    """
    t = as_rational(t)
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    bad = set(f.breakpoints) | set(T.breakpoints())
    sums = []
    acc = None
    x = t
    for j in range(k_max + 1):
        if x in bad or not 0 <= x < 1:
            raise BreakpointHit(x, j)
        v = f(x)
        acc = v if acc is None else acc + v
        sums.append(acc)
        x = T(x)
    return sums
