"""Exact rational linear algebra used by the rearrangement constructions.

Everything here works on plain lists of Fractions. Matrices are given by
columns because both callers think in terms of "one column per variable".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional, Sequence

from gmpy2 import mpq

Column = Sequence[Fraction]


def rref(rows: list) -> tuple:
    """Reduced row echelon form, in place. Returns (rows, pivot_columns).

    Pivots are taken at the first nonzero entry. With exact arithmetic the
    RREF is unique, so the choice affects neither result nor determinism.
    """
    if not rows:
        return rows, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [a / lead for a in rows[r]]
        pr = rows[r]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def nullspace_vector(columns: Sequence[Column]) -> Optional[list]:
    """A nonzero z with sum_j z_j * columns[j] = 0, or None if independent.

    The vector is canonical: the first free column gets coefficient 1 and
    the other free columns 0. Scaling any row of the matrix leaves it
    unchanged.
    """
    if not columns:
        return None
    n_rows = len(columns[0])
    if all(type(a) is int for col in columns for a in col):
        return _int_nullspace_vector(columns)
    rows = [[Fraction(col[i]) for col in columns] for i in range(n_rows)]
    rows, pivots = rref(rows)
    free = next((c for c in range(len(columns)) if c not in pivots), None)
    if free is None:
        return None
    z = [Fraction(0)] * len(columns)
    z[free] = Fraction(1)
    for r, c in enumerate(pivots):
        z[c] = -rows[r][free]
    return z


def _int_nullspace_vector(columns, make=Fraction):
    # fraction-free Gauss-Jordan; same pivots (hence same canonical z) as rref.
    # Entries grow with each pivot, which is harmless at these sizes.
    n_rows, n_cols = len(columns[0]), len(columns)
    rows = [[col[i] for col in columns] for i in range(n_rows)]
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        for piv in range(r, n_rows):
            if rows[piv][c]:
                break
        else:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        lead = pr[c]
        for i in range(n_rows):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [a * lead - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    if len(pivots) == n_cols:
        return None
    free = next(c for c in range(n_cols) if c not in pivots)
    z = [make(0)] * n_cols
    z[free] = make(1)
    for r, c in enumerate(pivots):
        z[c] = make(-rows[r][free], rows[r][c])
    return z


def rank(columns: Sequence[Column]) -> int:
    if not columns:
        return 0
    rows = [[Fraction(col[i]) for col in columns] for i in range(len(columns[0]))]
    return len(rref(rows)[1])


def walk_to_vertex(
    columns: Sequence[Column],
    point: Sequence[Fraction],
    lower: Sequence[Fraction],
    upper: Sequence[Optional[Fraction]],
    stop: Optional[Callable[[list], bool]] = None,
    prefer_lower: bool = False,
) -> list:
    """Move ``point`` inside {x : A x = A point, lower <= x <= upper} to a vertex.

    Free coordinates (strictly inside their bounds) are pushed along null
    directions of their columns until one of them hits a bound; this repeats
    until the free columns are linearly independent, which makes the point a
    vertex. ``stop(x)`` may end the walk early. ``upper`` entries may be None.
    With ``prefer_lower`` the direction whose first blocking coordinate lands
    on its lower bound wins (otherwise +z is tried first).
    """
    # the walk runs on gmpy2 rationals for speed; results come back as Fractions
    x = [_to_mpq(a) for a in point]
    lower = [_to_mpq(a) for a in lower]
    upper = [None if a is None else _to_mpq(a) for a in upper]
    return _to_fractions(walk_mpq(columns, x, lower, upper, stop, prefer_lower))


def walk_mpq(columns, x, lower, upper, stop=None, prefer_lower=False) -> list:
    """walk_to_vertex on gmpy2 ``mpq`` values, updating ``x`` in place."""
    if not columns:
        return x
    n_rows = len(columns[0])
    integral = all(type(a) is int for col in columns for a in col)
    while True:
        if stop is not None and stop(x):
            return x
        free = [j for j in range(len(x))
                if x[j] > lower[j] and (upper[j] is None or x[j] < upper[j])]
        if prefer_lower:
            # the smallest free weights are the likeliest to reach their lower bound
            free.sort(key=lambda j: x[j] - lower[j])
        cand = free[: n_rows + 1]
        sub = [columns[j] for j in cand]
        if integral:
            z = _int_nullspace_vector(sub, mpq)
        else:
            z = nullspace_vector(sub)
            z = z and [_to_mpq(a) for a in z]
        if z is None:
            return x
        step, hits_lower = _max_step(x, cand, z, lower, upper)
        if step is None or (prefer_lower and not hits_lower):
            neg = [-a for a in z]
            step2, hits_lower2 = _max_step(x, cand, neg, lower, upper)
            if step is None or hits_lower2:
                z, step = neg, step2
            if step is None:  # pragma: no cover - impossible with finite lower bounds
                raise RuntimeError("unbounded null direction")
        for j, zj in zip(cand, z):
            if zj:
                x[j] += step * zj
                if x[j] < lower[j]:  # pragma: no cover - exact arithmetic
                    x[j] = lower[j]


def _to_mpq(a):
    a = Fraction(a)
    return mpq(a.numerator, a.denominator)


def _to_fractions(x) -> list:
    return [Fraction(int(a.numerator), int(a.denominator)) for a in x]


def _max_step(x, cand, z, lower, upper):
    """Largest feasible step along z, and whether a lower bound blocks it first."""
    best, at_lower = None, False
    for j, zj in zip(cand, z):
        if zj > 0:
            if upper[j] is None:
                continue
            t, low = (upper[j] - x[j]) / zj, False
        elif zj < 0:
            t, low = (x[j] - lower[j]) / (-zj), True
        else:
            continue
        if best is None or t < best:
            best, at_lower = t, low
        elif t == best and low:
            at_lower = True
    return best, at_lower


def convex_weights_for_zero(points: Sequence[Column]) -> Optional[list]:
    """Weights w >= 0, sum w = 1, sum w_i p_i = 0; None if 0 is not in conv(points).

    Phase-one simplex with Bland's rule on an exact tableau; the returned
    weights form a basic solution (at most dim+1 nonzero).
    """
    if not points:
        return None
    dim = len(points[0])
    n = len(points)
    # rows: dim coordinate equations (= 0) and one normalisation (= 1)
    rows = [[Fraction(p[i]) for p in points] + [Fraction(0)] for i in range(dim)]
    rows.append([Fraction(1)] * n + [Fraction(1)])
    m = len(rows)
    # tableau columns: n real, m artificial, rhs
    tab = []
    for i, r in enumerate(rows):
        art = [Fraction(int(k == i)) for k in range(m)]
        tab.append(r[:n] + art + [r[n]])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimise sum of artificials, i.e. reduced costs = -sum rows on real columns
    cost = [Fraction(0)] * (width + 1)
    for r in tab:
        for j in range(n):
            cost[j] -= r[j]
        cost[width] -= r[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - phase one is bounded
            return None
        i = best[1]
        _pivot(tab, cost, i, enter)
        basis[i] = enter
    if cost[width] != 0:
        return None
    w = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            w[b] = tab[i][width]
    return w


def _pivot(tab, cost, i, j):
    piv = tab[i][j]
    tab[i] = [a / piv for a in tab[i]]
    row = tab[i]
    for k in range(len(tab)):
        if k != i and tab[k][j] != 0:
            f = tab[k][j]
            tab[k] = [a - f * b for a, b in zip(tab[k], row)]
    if cost[j] != 0:
        f = cost[j]
        cost[:] = [a - f * b for a, b in zip(cost, row)]
