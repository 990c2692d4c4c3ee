"""Steinitz rearrangement with the anchored prefix bound, and an exact oracle.

``steinitz_rearrange`` follows the Grinberg-Sevast'yanov peeling argument.
It keeps nested index sets B_n, ..., B_d with |B_k| = k and weights
lam in [0,1]^{B_k} satisfying

    sum lam = k - d,    sum lam_i x_i = ((k - d) / n) x.

To drop from B_k to B_{k-1} the weights are scaled to the smaller target and
walked to a vertex of the weight polytope. A vertex has a zero coordinate,
and that index takes position k. For k >= d this gives

    sum_{i in B_k} x_i - ((k-d)/n) x = sum_{i in B_k} (1 - lam_i) x_i,

whose norm is at most (k - (k - d)) * max|x_i| = d * max|x_i|.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .core.linalg import walk_mpq
from .core.norms import Norm, NormValue
from .core.vectors import RationalVector, common_dim, vector_sum
from .errors import BoundViolated, EmptyInput, NotMeanZero, TooLarge

log = logging.getLogger(__name__)

ORACLE_MAX_N = 12


@dataclass(frozen=True)
class RearrangementResult:
    permutation: tuple  # 0-based: permutation[k] is the index placed at position k+1
    achieved_bound: NormValue
    anchor: RationalVector
    max_norm: NormValue

    @property
    def guaranteed_bound(self) -> NormValue:
        return self.max_norm * self.anchor.dim


def anchored_deviations(vectors: Sequence[RationalVector], order: Sequence[int],
                        norm: Norm, d: int | None = None) -> list:
    """||sum_{i<=k} x_{order(i)} - ((k-d)/n) x|| for k = 1..n.

    Deliberately naive: a fresh running sum, no reuse of constructor state.
    """
    n = len(vectors)
    d = len(vectors[0]) if d is None else d
    total = vector_sum(list(vectors))
    out = []
    running = RationalVector.zero(len(total))
    for k, idx in enumerate(order, start=1):
        running = running + vectors[idx]
        out.append(norm(running - total * Fraction(k - d, n)))
    return out


def _peel(vectors: Sequence[RationalVector]) -> list:
    n, d = len(vectors), len(vectors[0])
    if n <= d or all(v.is_zero() for v in vectors):
        return list(range(n))
    # the order is invariant under scaling, so clear denominators once
    den = math.lcm(*(a.denominator for v in vectors for a in v.entries))
    columns = [(1,) + tuple(int(a * den) for a in v.entries) for v in vectors]
    active = list(range(n))
    lam = [mpq(n - d, n)] * n
    zero, one = mpq(0), mpq(1)
    tail = []
    for k in range(n, d, -1):
        scale = mpq(k - 1 - d, k - d)
        point = walk_mpq([columns[i] for i in active], [a * scale for a in lam],
                         [zero] * k, [one] * k, stop=lambda x: zero in x, prefer_lower=True)
        # ties: drop the highest index so lower indices stay early in the order
        pos = max(j for j, a in enumerate(point) if a == 0)
        tail.append(active[pos])
        del active[pos], point[pos]
        lam = point
    return active + tail[::-1]


def steinitz_rearrange(vectors: Sequence[RationalVector], norm: Norm = Norm.L2) -> RearrangementResult:
    """Order ``vectors`` so every anchored prefix deviation is at most d * max norm.

    Works for any total x = sum x_i. When x = 0 the guarantee is the classical
    Steinitz bound ||prefix|| <= d * max||x_i||.
    """
    vectors = list(vectors)
    if not vectors:
        raise EmptyInput("steinitz_rearrange needs at least one vector")
    d = common_dim(vectors)
    norm = Norm.parse(norm)
    order = _peel(vectors)
    devs = anchored_deviations(vectors, order, norm, d)
    achieved = max(devs)
    limit = norm.max_of(vectors) * d
    if not achieved <= limit:
        log.warning("peeling produced %s > %s; falling back to search", achieved, limit)
        if len(vectors) > ORACLE_MAX_N:
            raise BoundViolated(f"Steinitz order violates {achieved} <= {limit}")
        order = _exhaustive_anchored(vectors, norm, d)
        devs = anchored_deviations(vectors, order, norm, d)
        achieved = max(devs)
        if not achieved <= limit:  # pragma: no cover - the theorem forbids this
            raise BoundViolated(f"no order meets {limit}")
    return RearrangementResult(tuple(order), achieved, vector_sum(vectors), norm.max_of(vectors))


def _exhaustive_anchored(vectors, norm, d):
    best = None
    for order in itertools.permutations(range(len(vectors))):
        val = max(anchored_deviations(vectors, order, norm, d))
        if best is None or val < best[0]:
            best = (val, order)
    return list(best[1])


def greedy_order(vectors: Sequence[RationalVector], norm: Norm) -> list:
    """Repeatedly append the unused vector giving the smallest prefix norm."""
    remaining = list(range(len(vectors)))
    running = RationalVector.zero(len(vectors[0]))
    order = []
    while remaining:
        best = min(remaining, key=lambda i: (norm.gauge(running + vectors[i]), i))
        running = running + vectors[best]
        order.append(best)
        remaining.remove(best)
    return order


def max_prefix_gauge(vectors, order, norm) -> Fraction:
    running = RationalVector.zero(len(vectors[0]))
    best = Fraction(0)
    for i in order:
        running = running + vectors[i]
        g = norm.gauge(running)
        if g > best:
            best = g
    return best


def steinitz_oracle(vectors: Sequence[RationalVector], norm: Norm = Norm.L2) -> tuple:
    """Exact min over orders of the max prefix norm, for zero-sum families.

    Returns ``(optimal_bound, witness)`` where the witness is the
    lexicographically least optimal order. Depth-first search in
    lexicographic order with pruning; equal vectors are tried once per
    position (the lowest index stands in for its copies).
    """
    vectors = list(vectors)
    n = len(vectors)
    if n == 0:
        raise EmptyInput("oracle needs at least one vector")
    if n > ORACLE_MAX_N:
        raise TooLarge(f"oracle is limited to n <= {ORACLE_MAX_N} (got {n})")
    d = common_dim(vectors)
    norm = Norm.parse(norm)
    total = vector_sum(vectors)
    if not total.is_zero():
        raise NotMeanZero(total)

    entries = [e.entries for e in vectors]
    upper = min(max_prefix_gauge(vectors, greedy_order(vectors, norm), norm),
                max_prefix_gauge(vectors, _peel(vectors), norm))
    state = {"best": upper, "witness": None}
    used = [False] * n
    order = []

    def visit(running, worst):
        if len(order) == n:
            if state["witness"] is None or worst < state["best"]:
                state["best"], state["witness"] = worst, tuple(order)
            return
        tried = set()
        for i in range(n):
            if used[i] or entries[i] in tried:
                continue
            tried.add(entries[i])
            nxt = tuple(a + b for a, b in zip(running, entries[i]))
            g = norm.gauge(nxt)
            w = g if g > worst else worst
            if w > state["best"] or (state["witness"] is not None and w >= state["best"]):
                continue
            used[i] = True
            order.append(i)
            visit(nxt, w)
            order.pop()
            used[i] = False

    visit((Fraction(0),) * d, Fraction(0))
    return NormValue(state["best"], norm.power), state["witness"]


def unit_circle_point(t: Fraction) -> RationalVector:
    """((1 - t^2) / (1 + t^2), 2t / (1 + t^2)): an exact rational unit vector."""
    t = Fraction(t)
    s = 1 + t * t
    return RationalVector._wrap(((1 - t * t) / s, 2 * t / s))


@dataclass(frozen=True)
class PlanarSearchResult:
    best_ratio: NormValue  # oracle / max norm, exact as a ratio of gauges
    vectors: tuple
    witness: tuple
    history: tuple  # running maximum of the ratio after each trial (floats)


def planar_search(seed: int, trials: int = 12, steps: int = 40, copies: int = 3,
                  resolution: int = 1000) -> PlanarSearchResult:
    """Seeded search for Euclidean planar families with a large Steinitz ratio.

    Families are ``copies`` times two exact unit vectors x, y plus the closing
    vector -copies * (x + y); these contain the near-extremal configurations.
    Directions are drawn from rational points of the unit circle and improved
    by random local moves. Every value is the exact oracle optimum divided by
    the largest norm, so it never exceeds the planar Steinitz constant.
    """
    import random

    rng = random.Random(seed)

    def family(s, u):
        x, y = unit_circle_point(s), unit_circle_point(u)
        return [x] * copies + [y] * copies + [-(x + y) * copies]

    def ratio(vs):
        opt, wit = steinitz_oracle(vs, Norm.L2)
        m = Norm.L2.max_of(vs)
        return NormValue(opt.gauge / m.gauge, 2), wit

    best = None
    history = []
    for _ in range(trials):
        s = Fraction(rng.randint(-resolution, resolution), resolution)
        u = Fraction(rng.randint(-resolution, resolution), resolution)
        cur = ratio(family(s, u))
        for _ in range(steps):
            s2 = s + Fraction(rng.randint(-resolution // 20, resolution // 20), resolution)
            u2 = u + Fraction(rng.randint(-resolution // 20, resolution // 20), resolution)
            cand = ratio(family(s2, u2))
            if cand[0] >= cur[0]:
                s, u, cur = s2, u2, cand
        if best is None or cur[0] > best[0]:
            best = (cur[0], tuple(family(s, u)), cur[1])
        history.append(float(best[0]))
    return PlanarSearchResult(best[0], best[1], best[2], tuple(history))
