"""The coboundary equation f = g o T - g on finite and step-function models.

Also hosts the Browder partial-sum check, the simplex family showing that
the bounds cannot survive in infinite dimension, and a signed simultaneous
Diophantine approximation search.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core.functions import DiscreteFunction, StepFunction
from .core.iet import IntervalExchange, compose
from .core.norms import Norm, NormValue
from .core.vectors import RationalVector, as_rational
from .errors import (BoundViolated, DimensionTooLarge, InvalidInstance, NotMeanZero,
                     SearchExhausted, UnequalIntervals)
from .steinitz import steinitz_rearrange

COUNTEREXAMPLE_MAX_N = 8
EXHAUSTIVE_MAX_DIM = 8


@dataclass(frozen=True)
class DiscreteSolution:
    sigma: tuple  # sigma[i] is the successor of point i; a single n-cycle
    order: tuple  # the cycle listed from its start point
    g: DiscreteFunction
    certified_bound: NormValue  # ||g||_inf, verified
    f_norm: NormValue
    norm: Norm

    @property
    def start(self) -> int:
        return self.order[0]

    def meets_planar_constant(self) -> bool | None:
        """||g||^2 <= (5/4) ||f||^2 for Euclidean R^2; None elsewhere.

        Informational only: the construction certifies d * ||f||, not the
        sharp planar constant.
        """
        if self.norm is not Norm.L2 or self.g.dim != 2:
            return None
        return self.certified_bound.gauge <= Fraction(5, 4) * self.f_norm.gauge


@dataclass(frozen=True)
class StepSolution:
    T: IntervalExchange
    g: StepFunction
    certified_bound: NormValue
    discrete: DiscreteSolution


def _is_single_cycle(sigma: Sequence[int]) -> bool:
    n = len(sigma)
    seen, i = 0, 0
    for _ in range(n):
        i = sigma[i]
        seen += 1
        if i == 0:
            break
    return seen == n and i == 0


def discrete_residual(f: DiscreteFunction, g: DiscreteFunction, sigma: Sequence[int]) -> list:
    """[f(i) - (g(sigma(i)) - g(i))] for every point i."""
    return [f[i] - (g[sigma[i]] - g[i]) for i in range(f.n)]


def solve_discrete(f: DiscreteFunction, norm: Norm = Norm.L2) -> DiscreteSolution:
    """Cyclic sigma and g with f = g o sigma - g and ||g|| <= d ||f||.

    The cycle visits the points in Steinitz order; g is the running sum of f
    along it, starting from 0.
    """
    norm = Norm.parse(norm)
    if not isinstance(f, DiscreteFunction):
        f = DiscreteFunction(tuple(f))
    total = f.total()
    if not total.is_zero():
        raise NotMeanZero(total / f.n)
    n, d = f.n, f.dim
    order = steinitz_rearrange(list(f.values), norm).permutation
    g = [None] * n
    acc = RationalVector.zero(d)
    for idx in order:
        g[idx] = acc
        acc = acc + f[idx]
    sigma = [0] * n
    for k, idx in enumerate(order):
        sigma[idx] = order[(k + 1) % n]
    gf = DiscreteFunction(tuple(g))
    if not _is_single_cycle(sigma):  # pragma: no cover - order is a permutation
        raise BoundViolated("sigma is not a single cycle")
    if any(not r.is_zero() for r in discrete_residual(f, gf, sigma)):
        raise BoundViolated("discrete residual is not zero")
    g_norm, f_norm = gf.sup_norm(norm), f.sup_norm(norm)
    if not g_norm <= f_norm * d:
        raise BoundViolated(f"||g|| = {g_norm} exceeds {d} * ||f|| = {f_norm * d}")
    return DiscreteSolution(tuple(sigma), tuple(order), gf, g_norm, f_norm, norm)


def solve_equal_intervals(f: StepFunction, norm: Norm = Norm.L2) -> StepSolution:
    """Solve on [0,1) for f constant on the intervals [k/n, (k+1)/n).

    Such f is a function on n points with counting measure (scaled by 1/n),
    so the discrete solution lifts: T translates interval k onto interval
    sigma(k).
    """
    norm = Norm.parse(norm)
    if not f.has_equal_intervals():
        raise UnequalIntervals("breakpoints are not the equal grid k/n")
    m = f.mean()
    if not m.is_zero():
        raise NotMeanZero(m)
    disc = solve_discrete(DiscreteFunction(f.values), norm)
    T = IntervalExchange.from_permutation(disc.sigma)
    g = StepFunction(f.breakpoints, disc.g.values)
    residual = verify_solution(f, g, T, norm)
    if residual:
        raise BoundViolated(f"step residual {residual} is not zero")
    return StepSolution(T, g, g.sup_norm(norm), disc)


def residual_function(f: StepFunction, g: StepFunction, T: IntervalExchange) -> StepFunction:
    return f - (compose(g, T) - g)


def verify_solution(f: StepFunction, g: StepFunction, T: IntervalExchange,
                    norm: Norm = Norm.L2) -> NormValue:
    """Sup norm of f - (g o T - g) over the common refinement; 0 iff exact."""
    return residual_function(f, g, T).sup_norm(Norm.parse(norm))


def browder_profile(f: StepFunction, T: IntervalExchange, X: Sequence[tuple],
                    k_max: int, norm: Norm = Norm.L2) -> list:
    """[ess sup over X of ||sum_{j<=k} f o T^j|| for k = 0..k_max].

    Uses S_0 = f and S_k = f + S_{k-1} o T, each an exact step function.
    """
    norm = Norm.parse(norm)
    region = [(as_rational(a), as_rational(b)) for a, b in X]
    if not region or sum(b - a for a, b in region) <= 0:
        raise InvalidInstance("X must have positive length")
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    out = []
    s = f
    for k in range(k_max + 1):
        if k:
            s = f + compose(s, T)
        out.append(s.sup_norm_on(norm, region))
    return out


def verify_browder(f: StepFunction, T: IntervalExchange, X: Sequence[tuple],
                   k_max: int, norm: Norm = Norm.L2) -> NormValue:
    """max over k <= k_max of the sup over X of the k-th orbit partial sum."""
    return max(browder_profile(f, T, X, k_max, norm))


# -- the simplex family ----------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleReport:
    n: int
    d: int
    vectors: tuple
    norm_sq: Fraction  # common value of ||x_k||^2
    min_half_sum_norm_sq: Fraction
    lower_bound_sq: Fraction  # d / 8
    method: str  # "exhaustive" or "count-dp"
    checked_multisets: int

    @property
    def min_half_sum_norm(self) -> float:
        return math.sqrt(self.min_half_sum_norm_sq)

    @property
    def lower_bound(self) -> float:
        return math.sqrt(self.lower_bound_sq)


def simplex_vertices(d: int) -> list:
    """x_k = e_k - (1/d)(1, ..., 1), the centred simplex in R^d."""
    c = Fraction(1, d)
    return [RationalVector._wrap(tuple(Fraction(int(i == k)) - c for i in range(d)))
            for k in range(d)]


def simplex_counterexample(n: int, samples: int = 200, seed: int = 0) -> CounterexampleReport:
    """Check the centred simplex in d = 2^n and bound sums of d/2 vertices.

    For d <= 8 every multiset of d/2 vertices is enumerated. Beyond that the
    minimum is found exactly by a dynamic program over vertex counts: if
    vertex k is used c_k times the sum is (c_k - 1/2)_k, so ||y||^2 is a
    separable function of the counts. Seeded random multisets are checked
    against that minimum as an independent audit.
    """
    if n < 1:
        raise InvalidInstance("n must be at least 1")
    if n > COUNTEREXAMPLE_MAX_N:
        raise DimensionTooLarge(f"n = {n} exceeds {COUNTEREXAMPLE_MAX_N} (d = 2^n)")
    d = 2 ** n
    xs = simplex_vertices(d)
    norm_sq = Fraction(d - 1, d)
    for x in xs:
        if Norm.L2.gauge(x) != norm_sq:  # pragma: no cover - exact identity
            raise BoundViolated(f"||x_k||^2 != {norm_sq}")
    total = RationalVector.zero(d)
    for x in xs:
        total = total + x
    if not total.is_zero():  # pragma: no cover
        raise BoundViolated("simplex vertices do not sum to zero")
    half = d // 2
    if d <= EXHAUSTIVE_MAX_DIM:
        best, count = None, 0
        for combo in itertools.combinations_with_replacement(range(d), half):
            y = RationalVector.zero(d)
            for k in combo:
                y = y + xs[k]
            g = Norm.L2.gauge(y)
            best = g if best is None or g < best else best
            count += 1
        method = "exhaustive"
    else:
        best = _count_dp_minimum(d, half)
        rng = random.Random(seed)
        count = 0
        for _ in range(samples):
            combo = [rng.randrange(d) for _ in range(half)]
            counts = [0] * d
            for k in combo:
                counts[k] += 1
            g = sum((Fraction(2 * c - 1, 2) ** 2 for c in counts), Fraction(0))
            if g < best:  # pragma: no cover - the program is exact
                raise BoundViolated("a sampled multiset beats the computed minimum")
            count += 1
        method = "count-dp"
    lower = Fraction(d, 8)
    if best < lower:
        raise BoundViolated(f"min half-sum norm^2 {best} < d/8 = {lower}")
    return CounterexampleReport(n, d, tuple(xs), norm_sq, best, lower, method, count)


def _count_dp_minimum(d: int, half: int) -> Fraction:
    """min sum_k (c_k - 1/2)^2 over c_k >= 0 with sum c_k = half, exactly."""
    # work with 4 (c - 1/2)^2 = (2c - 1)^2 to stay in integers
    inf = None
    best = [0] + [inf] * half
    for _ in range(d):
        nxt = [inf] * (half + 1)
        for used, val in enumerate(best):
            if val is None:
                continue
            for c in range(half - used + 1):
                cand = val + (2 * c - 1) ** 2
                if nxt[used + c] is None or cand < nxt[used + c]:
                    nxt[used + c] = cand
        best = nxt
    return Fraction(best[half], 4)


# -- signed Diophantine approximation -------------------------------------------

@dataclass(frozen=True)
class DiophantineResult:
    q: int
    p: tuple
    w: RationalVector


def convergent_denominators(x: Fraction, limit: int) -> list:
    """Denominators of the continued-fraction convergents of x up to ``limit``."""
    x = Fraction(x)
    q_prev, q = 0, 1
    out = [1]
    frac = x - math.floor(x)
    while frac:
        x = 1 / frac
        a = math.floor(x)
        q_prev, q = q, a * q + q_prev
        if q > limit:
            break
        out.append(q)
        frac = x - a
    return [q for q in out if q <= limit]


def _signed_round(q: int, x: Fraction, s: Fraction) -> int:
    num, den = x.numerator * q, x.denominator
    if s > 0:
        return -(-num // den)
    if s < 0:
        return num // den
    return (2 * num + den) // (2 * den)


def diophantine_signed(x: Sequence, v: RationalVector, eps, q_max: int,
                       order: str = "convergents") -> DiophantineResult:
    """Find q <= q_max and integers p with w = p/q - x, ||w||_inf < eps/q, (w, v) > 0.

    p_l rounds q x_l up where v_l > 0, down where v_l < 0 and to the nearest
    integer where v_l = 0. With ``order="convergents"`` the convergent
    denominators of every coordinate are tried first (ascending), then the
    remaining q in increasing order; ``order="increasing"`` skips the seeding.
    """
    xs = [as_rational(a) for a in x]
    if not isinstance(v, RationalVector):
        v = RationalVector(v)
    eps = as_rational(eps)
    if len(xs) != len(v) or not xs:
        raise InvalidInstance("x and v must have the same positive length")
    if v.is_zero():
        raise InvalidInstance("v must be nonzero")
    if eps <= 0:
        raise InvalidInstance("eps must be positive")
    if q_max < 1:
        raise InvalidInstance("q_max must be at least 1")
    if order not in ("convergents", "increasing"):
        raise InvalidInstance(f"unknown search order {order!r}")
    seeds = []
    if order == "convergents":
        seeds = sorted({q for a in xs for q in convergent_denominators(a, q_max)})
    seen = set(seeds)
    for q in itertools.chain(seeds, (q for q in range(1, q_max + 1) if q not in seen)):
        p = tuple(_signed_round(q, a, s) for a, s in zip(xs, v))
        w = RationalVector._wrap(tuple(Fraction(pl, q) - a for pl, a in zip(p, xs)))
        if max(abs(c) for c in w) < eps / q and w.dot(v) > 0:
            return DiophantineResult(q, p, w)
    raise SearchExhausted(f"no q <= {q_max} meets the bounds")


__all__ = [
    "DiscreteSolution", "StepSolution", "solve_discrete", "solve_equal_intervals",
    "verify_solution", "verify_browder", "browder_profile", "residual_function",
    "discrete_residual", "CounterexampleReport", "simplex_counterexample", "simplex_vertices",
    "DiophantineResult", "diophantine_signed", "convergent_denominators",
]
