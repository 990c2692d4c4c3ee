"""Seeded random instances. Everything is a function of the seed alone."""

from __future__ import annotations

import random
from fractions import Fraction

from .cantor import CantorStep
from .core.functions import DiscreteFunction, StepFunction
from .core.norms import Norm
from .core.vectors import RationalVector, vector_sum
from .selection import VectorMatrix

DEFAULT_DENOMINATOR = 12


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_vector(rng: random.Random, d: int, den: int = DEFAULT_DENOMINATOR) -> RationalVector:
    return RationalVector._wrap(tuple(Fraction(rng.randint(-den, den), den) for _ in range(d)))


def random_ball_vector(rng: random.Random, d: int, norm: Norm,
                       den: int = DEFAULT_DENOMINATOR) -> RationalVector:
    """Uniform grid point of the closed unit ball of ``norm`` (rejection sampling)."""
    while True:
        v = random_vector(rng, d, den)
        if norm.gauge(v) <= 1:
            return v


def zero_sum_vectors(seed, n: int, d: int, den: int = DEFAULT_DENOMINATOR) -> list:
    """n vectors in Q^d summing to 0: n - 1 random ones and their negated total."""
    rng = _rng(seed)
    if n == 1:
        return [RationalVector.zero(d)]
    vs = [random_vector(rng, d, den) for _ in range(n - 1)]
    return vs + [-vector_sum(vs)]


def random_discrete(seed, n: int, d: int, den: int = DEFAULT_DENOMINATOR) -> DiscreteFunction:
    return DiscreteFunction(tuple(zero_sum_vectors(seed, n, d, den)))


def random_step(seed, n: int, d: int, den: int = DEFAULT_DENOMINATOR) -> StepFunction:
    return StepFunction.equal_intervals(zero_sum_vectors(seed, n, d, den))


def random_cantor(seed, q: int, depth: int, d: int, r=1,
                  den: int = DEFAULT_DENOMINATOR) -> CantorStep:
    vals = zero_sum_vectors(seed, q * 2 ** depth, d, den)
    return CantorStep(q, Fraction(r), depth, tuple(vals))


def random_matrix(seed, n: int, m: int, d: int, norm: Norm = Norm.L2, zero_rows: bool = False,
                  den: int = DEFAULT_DENOMINATOR) -> VectorMatrix:
    """Entries in the unit ball with max entry norm exactly 1.

    With ``zero_rows`` every row is centred to sum to zero and then rescaled
    so that the largest entry norm is again 1 where the norm allows an exact
    rescaling (L1, LINF); for L2 the largest norm is at most 1.
    """
    rng = _rng(seed)
    norm = Norm.parse(norm)
    rows = [[random_ball_vector(rng, d, norm, den) for _ in range(m)] for _ in range(n)]
    i, j, k = rng.randrange(n), rng.randrange(m), rng.randrange(d)
    sign = rng.choice((1, -1))
    rows[i][j] = RationalVector._wrap(tuple(Fraction(sign * int(t == k)) for t in range(d)))
    if zero_rows:
        centred = []
        for row in rows:
            c = vector_sum(row) / m
            centred.append([v - c for v in row])
        rows = centred
        top = norm.max_of(v for row in rows for v in row)
        if top and norm is not Norm.L2:
            rows = [[v / top.gauge for v in row] for row in rows]
        elif top > 1:  # centring at most doubles a norm
            s = Fraction(1, 2)
            rows = [[v * s for v in row] for row in rows]
    return VectorMatrix(tuple(tuple(r) for r in rows), norm)


def random_scalar_matrix(seed, n: int, m: int, den: int = DEFAULT_DENOMINATOR) -> VectorMatrix:
    """An n x m scalar matrix with zero row sums."""
    rng = _rng(seed)
    rows = []
    for _ in range(n):
        vals = [Fraction(rng.randint(-den, den), den) for _ in range(m - 1)]
        vals.append(-sum(vals, Fraction(0)))
        rows.append(tuple(RationalVector._wrap((a,)) for a in vals))
    return VectorMatrix(tuple(rows), Norm.L1)


__all__ = [
    "random_vector", "random_ball_vector", "zero_sum_vectors", "random_discrete", "random_step",
    "random_cantor", "random_matrix", "random_scalar_matrix",
]
