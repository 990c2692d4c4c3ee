"""Vector selection, splitting and Kwapien-type permutation families in Q^d.

Conventions: rows are indexed by i, columns by j, both 0-based. A
permutation family stores ``perms[i][j]``, the column of row i visited by
thread j; thread j therefore traces the entries v[i][perms[i][j]].
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core.linalg import convex_weights_for_zero, walk_to_vertex
from .core.norms import FLOAT_TOLERANCE, Norm, NormValue, within
from .core.vectors import RationalVector, common_dim, primitive_integer_form, vector_sum
from .errors import (BoundViolated, ConvexHullViolation, EmptyInput, InvalidInstance,
                     RowNotMeanZero, TooLarge)
from .steinitz import steinitz_rearrange

log = logging.getLogger(__name__)

# 1 / log(1.5): the geometric series behind the recursion.
KWAPIEN_FACTOR = 1 / math.log(1.5)

SELECTION_ORACLE_LIMIT = 200_000
KWAPIEN_ORACLE_LIMIT = 2_000_000


def kwapien_constant(d: int, m: int | None = None) -> float:
    """8 d^2 / log 1.5, or the sharper 8 d^2 (1 - 3/(2m)) / log 1.5 for a known m."""
    c = 8 * d * d * KWAPIEN_FACTOR
    if m is None:
        return c
    return max(0.0, c * (1 - 1.5 / m))


@dataclass(frozen=True)
class VectorMatrix:
    """An n x m grid of vectors in Q^d together with the norm used on Q^d."""

    entries: tuple
    norm: Norm = Norm.L2

    def __post_init__(self):
        rows = tuple(tuple(v if isinstance(v, RationalVector) else RationalVector(v) for v in row)
                     for row in self.entries)
        if not rows or not rows[0]:
            raise EmptyInput("a matrix needs at least one row and one column")
        if len({len(r) for r in rows}) != 1:
            raise InvalidInstance("rows have different lengths")
        try:
            common_dim(v for r in rows for v in r)
        except ValueError as exc:
            raise InvalidInstance(str(exc)) from None
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "norm", Norm.parse(self.norm))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def m(self) -> int:
        return len(self.entries[0])

    @property
    def d(self) -> int:
        return len(self.entries[0][0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> tuple:
        return self.entries

    def max_entry_norm(self) -> NormValue:
        return self.norm.max_of(v for r in self.entries for v in r)

    def row_sums(self) -> list:
        return [vector_sum(list(r)) for r in self.entries]

    def anchors(self) -> list:
        """x_k = (1/m) * sum_{i<=k} sum_j v[i][j] for k = 1..n."""
        out, acc = [], RationalVector.zero(self.d)
        for s in self.row_sums():
            acc = acc + s
            out.append(acc / self.m)
        return out

    def scaled(self, c) -> "VectorMatrix":
        return VectorMatrix(tuple(tuple(v * c for v in r) for r in self.entries), self.norm)

    def with_rows(self, rows) -> "VectorMatrix":
        return VectorMatrix(tuple(tuple(r) for r in rows), self.norm)


@dataclass(frozen=True)
class Selection:
    indices: tuple  # indices[i] is the position chosen inside C_i
    vectors: tuple
    achieved_bound: NormValue
    guaranteed_bound: NormValue
    method: str  # "greedy" or "rounding"


@dataclass(frozen=True)
class SplitResult:
    subsets: tuple  # sorted column tuples, one per row
    p: int
    achieved_bound: NormValue
    guaranteed_bound: NormValue


@dataclass(frozen=True)
class PermutationFamily:
    perms: tuple
    achieved_bound: NormValue
    guaranteed_bound: object  # Fraction-valued NormValue or float

    def threads(self) -> list:
        m = len(self.perms[0]) if self.perms else 0
        return [[p[j] for p in self.perms] for j in range(m)]


# -- independent verification -------------------------------------------------

def prefix_selection_norms(chosen: Sequence[RationalVector], norm: Norm) -> list:
    out, acc = [], None
    for v in chosen:
        acc = v if acc is None else acc + v
        out.append(norm(acc))
    return out


def split_deviations(matrix: VectorMatrix, subsets: Sequence, centered: bool) -> list:
    """||sum_{i<=k} sum_{j in I_i} v_ij - c_k|| with c_k = 0 or p * x_k."""
    p = len(subsets[0]) if subsets else 0
    out = []
    total = RationalVector.zero(matrix.d)
    everything = RationalVector.zero(matrix.d)
    for i, cols in enumerate(subsets):
        for j in cols:
            total = total + matrix.entries[i][j]
        for v in matrix.entries[i]:
            everything = everything + v
        target = everything * Fraction(p, matrix.m) if centered else RationalVector.zero(matrix.d)
        out.append(matrix.norm(total - target))
    return out


def family_deviations(matrix: VectorMatrix, perms: Sequence) -> list:
    """Rows k of ||sum_{i<=k} v[i][perms[i][j]] - x_k|| over threads j."""
    d, m = matrix.d, matrix.m
    thread = [RationalVector.zero(d) for _ in range(m)]
    everything = RationalVector.zero(d)
    out = []
    for i, row in enumerate(matrix.entries):
        for j in range(m):
            thread[j] = thread[j] + row[perms[i][j]]
        for v in row:
            everything = everything + v
        x = everything / m
        out.append([matrix.norm(t - x) for t in thread])
    return out


def _check_permutations(perms, n, m):
    if len(perms) != n or any(sorted(p) != list(range(m)) for p in perms):
        raise BoundViolated("constructed family is not a list of permutations")


# -- Barany-Grinberg selection -------------------------------------------------

def bg_select(sets: Sequence[Sequence[RationalVector]], norm: Norm = Norm.L2) -> Selection:
    """Pick c_i in C_i with every prefix sum of norm at most 2 d M.

    M is the largest norm of any vector offered. Greedy choice comes first;
    if it overshoots, a rounding of convex weights is used, which keeps at
    most d sets fractional at any time and so always meets the bound.
    """
    norm = Norm.parse(norm)
    sets = [list(c) for c in sets]
    if not sets:
        return Selection((), (), norm.zero(), norm.zero(), "greedy")
    for i, c in enumerate(sets):
        if not c:
            raise EmptyInput(f"set {i} is empty")
    flat = [v for c in sets for v in c]
    d = common_dim(flat)
    M = norm.max_of(flat)
    limit = M * (2 * d)
    ints = primitive_integer_form(flat) if M else [tuple([0] * d) for _ in flat]
    int_sets, pos = [], 0
    for c in sets:
        int_sets.append(ints[pos:pos + len(c)])
        pos += len(c)
    weights = [_hull_weights(c, i) for i, c in enumerate(int_sets)]

    idx = _greedy_select(int_sets, norm)
    method = "greedy"
    chosen = [sets[i][j] for i, j in enumerate(idx)]
    achieved = max(prefix_selection_norms(chosen, norm))
    if not achieved <= limit:
        log.info("greedy selection reached %s > %s; rounding", achieved, limit)
        idx = _round_select(int_sets, weights, d)
        method = "rounding"
        chosen = [sets[i][j] for i, j in enumerate(idx)]
        achieved = max(prefix_selection_norms(chosen, norm))
        if not achieved <= limit:
            raise BoundViolated(f"selection prefix {achieved} exceeds {limit}")
    return Selection(tuple(idx), tuple(chosen), achieved, limit, method)


def _hull_weights(points, index):
    for j, p in enumerate(points):
        if not any(p):
            w = [Fraction(0)] * len(points)
            w[j] = Fraction(1)
            return w
    w = convex_weights_for_zero(points)
    if w is None:
        raise ConvexHullViolation(index)
    return w


def _greedy_select(int_sets, norm):
    d = len(int_sets[0][0])
    running = (0,) * d
    idx = []
    for c in int_sets:
        best = min(range(len(c)),
                   key=lambda j: (norm.gauge(tuple(a + b for a, b in zip(running, c[j]))), j))
        running = tuple(a + b for a, b in zip(running, c[best]))
        idx.append(best)
    return idx


def _round_select(int_sets, weights, d):
    """Walk convex weights to vertices as sets arrive; at most d stay fractional."""
    n = len(int_sets)
    final = [None] * n
    frac = {}  # set index -> {position: weight}
    for k in range(n):
        frac[k] = {j: w for j, w in enumerate(weights[k]) if w}
        live = sorted(frac)
        slot = {i: s for s, i in enumerate(live)}
        keys = [(i, j) for i in live for j in sorted(frac[i])]
        columns = [tuple(int_sets[i][j]) + tuple(int(s == slot[i]) for s in range(len(live)))
                   for i, j in keys]
        point = [frac[i][j] for i, j in keys]
        zeros = [Fraction(0)] * len(keys)
        point = walk_to_vertex(columns, point, zeros, [None] * len(keys))
        frac = {}
        for (i, j), w in zip(keys, point):
            if w:
                frac.setdefault(i, {})[j] = w
        for i in list(frac):
            if len(frac[i]) == 1:
                final[i] = next(iter(frac[i]))
                del frac[i]
        if len(frac) > d:  # pragma: no cover - vertex property
            raise BoundViolated(f"{len(frac)} fractional sets after rounding step {k}")
    for i, ws in frac.items():
        final[i] = min(ws, key=lambda j: (-ws[j], j))
    return final


def selection_oracle(sets: Sequence[Sequence[RationalVector]], norm: Norm = Norm.L2) -> tuple:
    """Exact min over all selections of the max prefix norm.

    Returns ``(optimum, witness)`` with the lexicographically least optimal
    index tuple. Refuses instances with more than SELECTION_ORACLE_LIMIT
    selections.
    """
    norm = Norm.parse(norm)
    sets = [list(c) for c in sets]
    if not sets or any(not c for c in sets):
        raise EmptyInput("every set must be nonempty")
    if math.prod(len(c) for c in sets) > SELECTION_ORACLE_LIMIT:
        raise TooLarge(f"more than {SELECTION_ORACLE_LIMIT} selections")
    d = common_dim(v for c in sets for v in c)
    entries = [[v.entries for v in c] for c in sets]
    best = {"gauge": None, "witness": None}
    chosen = []

    def visit(running, worst):
        i = len(chosen)
        if i == len(sets):
            if best["gauge"] is None or worst < best["gauge"]:
                best["gauge"], best["witness"] = worst, tuple(chosen)
            return
        for j, e in enumerate(entries[i]):
            nxt = tuple(a + b for a, b in zip(running, e))
            w = max(worst, norm.gauge(nxt))
            if best["gauge"] is not None and w >= best["gauge"]:
                continue
            chosen.append(j)
            visit(nxt, w)
            chosen.pop()

    visit((Fraction(0),) * d, Fraction(0))
    return NormValue(best["gauge"], norm.power), best["witness"]


# -- scalar Kwapien -------------------------------------------------------------

def _require_zero_rows(matrix: VectorMatrix):
    for i, s in enumerate(matrix.row_sums()):
        if not s.is_zero():
            raise RowNotMeanZero(i, s)


def kwapien_scalar(matrix: VectorMatrix) -> PermutationFamily:
    """Permutations with every thread prefix |sum_{i<=k} a[i][sigma_i(j)]| <= 2C.

    Row by row, the threads with the smallest running sums receive the
    largest entries. The spread of the running sums then never exceeds
    max(spread so far, spread of the row) <= 2C, and the sums have mean 0.
    """
    if matrix.d != 1:
        raise InvalidInstance("kwapien_scalar needs scalar (d = 1) entries")
    _require_zero_rows(matrix)
    m = matrix.m
    sums = [Fraction(0)] * m
    perms = []
    for row in matrix.entries:
        vals = [v[0] for v in row]
        threads = sorted(range(m), key=lambda t: (sums[t], t))
        cols = sorted(range(m), key=lambda j: (-vals[j], j))
        perm = [0] * m
        for t, j in zip(threads, cols):
            perm[t] = j
            sums[t] += vals[j]
        perms.append(tuple(perm))
    C = matrix.max_entry_norm()
    return _finish_family(matrix, perms, C * 2)


def _finish_family(matrix, perms, limit):
    _check_permutations(perms, matrix.n, matrix.m)
    devs = family_deviations(matrix, perms)
    achieved = max(max(row) for row in devs)
    if not within(achieved, limit):
        raise BoundViolated(f"permutation family deviation {achieved} exceeds {limit}")
    return PermutationFamily(tuple(perms), achieved, limit)


# -- splitting lemmas -----------------------------------------------------------

def kwapien_split_zero(matrix: VectorMatrix, p: int) -> SplitResult:
    """Equal-size column sets I_i with prefix sums of norm at most 4 d^2 M.

    Each row is first put in Steinitz order, so every run of consecutive
    columns (cyclically) sums to at most 2 d M. Rows are repeated out to
    lcm(m, p) columns and cut into blocks of p; choosing one block per row
    is a selection problem over sets containing 0 in their hull.
    """
    _require_zero_rows(matrix)
    m, d, norm = matrix.m, matrix.d, matrix.norm
    if not 1 <= p <= m:
        raise InvalidInstance(f"need 1 <= p <= m = {m}, got p = {p}")
    orders = [steinitz_rearrange(list(row), norm).permutation for row in matrix.entries]
    m1 = math.lcm(m, p)
    m2 = m1 // p
    blocks = []
    for row, order in zip(matrix.entries, orders):
        rel = [row[c] for c in order]
        blocks.append([vector_sum([rel[r % m] for r in range(j * p, (j + 1) * p)])
                       for j in range(m2)])
    sel = bg_select(blocks, norm)
    subsets = tuple(tuple(sorted(order[r % m] for r in range(j * p, (j + 1) * p)))
                    for order, j in zip(orders, sel.indices))
    return _finish_split(matrix, subsets, p, centered=False, factor=4 * d * d)


def kwapien_split_general(matrix: VectorMatrix, p: int) -> SplitResult:
    """Equal-size column sets with ||sum_{i<=k} sum_{I_i} v - p x_k|| <= 8 d^2 M.

    Rows are centred as v' = v/2 - (row sum)/(2m), which sums to zero and
    keeps norms at most M; the deviation for v is exactly twice the prefix
    sum for v'.
    """
    centered = centering(matrix)
    inner = kwapien_split_zero(centered, p)
    return _finish_split(matrix, inner.subsets, p, centered=True, factor=8 * matrix.d ** 2)


def centering(matrix: VectorMatrix) -> VectorMatrix:
    """v'_ij = v_ij / 2 - (1 / 2m) sum_t v_it."""
    m = matrix.m
    rows = []
    for row, s in zip(matrix.entries, matrix.row_sums()):
        shift = s / (2 * m)
        rows.append(tuple(v / 2 - shift for v in row))
    return matrix.with_rows(rows)


def _finish_split(matrix, subsets, p, centered, factor):
    if any(len(s) != p or len(set(s)) != p or not all(0 <= j < matrix.m for j in s)
           for s in subsets):
        raise BoundViolated("split produced a set of the wrong size")
    devs = split_deviations(matrix, subsets, centered)
    achieved = max(devs)
    limit = matrix.max_entry_norm() * factor
    if not achieved <= limit:
        raise BoundViolated(f"split deviation {achieved} exceeds {limit}")
    return SplitResult(subsets, p, achieved, limit)


# -- multidimensional Kwapien ---------------------------------------------------

def kwapien_permutations(matrix: VectorMatrix) -> PermutationFamily:
    """Permutations keeping every thread within (8 d^2 / log 1.5) M of x_k.

    Recursion on m: one column is trivial; two columns are a sign choice for
    the centred pair; otherwise split off ceil(m/2) columns per row with the
    general splitting lemma and recurse on both halves.
    """
    perms = _kwapien(matrix)
    limit = float(matrix.max_entry_norm()) * kwapien_constant(matrix.d)
    return _finish_family(matrix, perms, limit)


def _kwapien(matrix: VectorMatrix) -> list:
    n, m = matrix.n, matrix.m
    if m == 1:
        return [(0,)] * n
    if m == 2:
        sets = []
        for a, b in matrix.entries:
            mid = (a + b) / 2
            sets.append([a - mid, b - mid])
        sel = bg_select(sets, matrix.norm)
        return [(j, 1 - j) for j in sel.indices]
    p = (m + 1) // 2
    split = kwapien_split_general(matrix, p)
    firsts = [list(s) for s in split.subsets]
    rests = [[j for j in range(m) if j not in set(s)] for s in firsts]
    left = _kwapien(matrix.with_rows([[row[j] for j in s] for row, s in zip(matrix.entries, firsts)]))
    right = _kwapien(matrix.with_rows([[row[j] for j in s] for row, s in zip(matrix.entries, rests)]))
    out = []
    for s, r, pl, pr in zip(firsts, rests, left, right):
        out.append(tuple(s[j] for j in pl) + tuple(r[j] for j in pr))
    return out


def kwapien_oracle(matrix: VectorMatrix) -> tuple:
    """Exact min over all permutation tuples of the max thread deviation.

    The first row's permutation is fixed to the identity: relabelling the
    threads does not change the objective. Returns ``(optimum, witness)``.
    """
    n, m = matrix.n, matrix.m
    if math.factorial(m) ** (n - 1) > KWAPIEN_ORACLE_LIMIT:
        raise TooLarge("too many permutation tuples for exhaustive search")
    norm = matrix.norm
    anchors = matrix.anchors()
    rows = [[v.entries for v in r] for r in matrix.entries]
    all_perms = list(itertools.permutations(range(m)))
    best = {"gauge": None, "witness": None}
    chosen = []

    def visit(threads, worst):
        i = len(chosen)
        if i == n:
            if best["gauge"] is None or worst < best["gauge"]:
                best["gauge"], best["witness"] = worst, tuple(chosen)
            return
        x = anchors[i].entries
        for perm in (all_perms[:1] if i == 0 else all_perms):
            nxt = [tuple(a + b for a, b in zip(t, rows[i][perm[j]])) for j, t in enumerate(threads)]
            w = max([worst] + [norm.gauge(tuple(a - b for a, b in zip(t, x))) for t in nxt])
            if best["gauge"] is not None and w >= best["gauge"]:
                continue
            chosen.append(perm)
            visit(nxt, w)
            chosen.pop()

    visit([(Fraction(0),) * matrix.d for _ in range(m)], Fraction(0))
    return NormValue(best["gauge"], norm.power), best["witness"]


__all__ = [
    "VectorMatrix", "Selection", "SplitResult", "PermutationFamily", "bg_select",
    "selection_oracle", "kwapien_scalar", "kwapien_split_zero", "kwapien_split_general",
    "kwapien_permutations", "kwapien_oracle", "kwapien_constant", "centering",
    "family_deviations", "split_deviations", "prefix_selection_norms", "FLOAT_TOLERANCE",
]
