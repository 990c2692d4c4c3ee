"""Exact rationals and fixed-dimension rational vectors."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

RationalLike = Union[int, Fraction, str]


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction.

    Strings of the form ``"p/q"``, ``"p"`` or a finite decimal are accepted.
    Floats are rejected: they would silently import binary rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a string or Fraction instead")
    return Fraction(x)


def is_dyadic(x: Fraction) -> bool:
    den = Fraction(x).denominator
    return den & (den - 1) == 0


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


class RationalVector:
    """Immutable d-tuple of Fractions with vector-space arithmetic."""

    __slots__ = ("_e",)

    def __init__(self, entries: Iterable[RationalLike]):
        e = tuple(as_rational(x) for x in entries)
        if not e:
            raise ValueError("a RationalVector needs at least one entry")
        self._e = e

    @classmethod
    def _wrap(cls, entries: tuple) -> "RationalVector":
        v = object.__new__(cls)
        v._e = entries
        return v

    @classmethod
    def zero(cls, dim: int) -> "RationalVector":
        return cls._wrap((Fraction(0),) * dim)

    @classmethod
    def basis(cls, dim: int, i: int) -> "RationalVector":
        return cls._wrap(tuple(Fraction(int(j == i)) for j in range(dim)))

    @property
    def dim(self) -> int:
        return len(self._e)

    @property
    def entries(self) -> tuple:
        return self._e

    def __len__(self) -> int:
        return len(self._e)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._e)

    def __getitem__(self, i):
        return self._e[i]

    def _check(self, other):
        if not isinstance(other, RationalVector):
            return NotImplemented
        if len(other._e) != len(self._e):
            raise ValueError(f"dimension mismatch: {len(self._e)} vs {len(other._e)}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return RationalVector._wrap(tuple(a + b for a, b in zip(self._e, other._e)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return RationalVector._wrap(tuple(a - b for a, b in zip(self._e, other._e)))

    def __neg__(self):
        return RationalVector._wrap(tuple(-a for a in self._e))

    def __mul__(self, c):
        if isinstance(c, RationalVector) or isinstance(c, float):
            return NotImplemented
        c = as_rational(c)
        return RationalVector._wrap(tuple(a * c for a in self._e))

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_rational(c)
        return RationalVector._wrap(tuple(a / c for a in self._e))

    def dot(self, other: "RationalVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self._e, other._e)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self._e)

    def __eq__(self, other):
        if not isinstance(other, RationalVector):
            return NotImplemented
        return self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self):
        return "RationalVector([" + ", ".join(format_rational(a) for a in self._e) + "])"

    def __str__(self):
        return "(" + ", ".join(format_rational(a) for a in self._e) + ")"

    def to_strings(self) -> list:
        return [format_rational(a) for a in self._e]


def vec(*entries: RationalLike) -> RationalVector:
    """Shorthand: ``vec(1, "1/2")``."""
    return RationalVector(entries)


def vector_sum(vectors: Sequence[RationalVector], dim: int | None = None) -> RationalVector:
    if not vectors:
        if dim is None:
            raise ValueError("cannot infer dimension of an empty sum")
        return RationalVector.zero(dim)
    acc = list(vectors[0].entries)
    for v in vectors[1:]:
        if len(v) != len(acc):
            raise ValueError("dimension mismatch in sum")
        for i, a in enumerate(v.entries):
            acc[i] += a
    return RationalVector._wrap(tuple(acc))


def prefix_sums(vectors: Sequence[RationalVector]) -> list:
    """[v0, v0+v1, ...]."""
    out = []
    acc = None
    for v in vectors:
        acc = v if acc is None else acc + v
        out.append(acc)
    return out


def common_dim(vectors: Iterable[RationalVector]) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise ValueError(f"vectors must share one dimension, got {sorted(dims)}")
    return dims.pop()


def primitive_integer_form(vectors: Sequence[RationalVector]) -> list:
    """Integer tuples proportional to ``vectors`` with content 1.

    The result depends only on the family up to a positive common factor,
    which makes downstream tie-breaking invariant under rescaling.
    """
    den = math.lcm(*(a.denominator for v in vectors for a in v.entries))
    ints = [tuple(a.numerator * (den // a.denominator) for a in v.entries) for v in vectors]
    g = math.gcd(*(a for t in ints for a in t))
    if g > 1:
        ints = [tuple(a // g for a in t) for t in ints]
    return ints
