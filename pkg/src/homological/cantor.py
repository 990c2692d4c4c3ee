"""Finite-depth coboundary towers on the Cantor space {1..q} x {1,2}^N.

A depth-n cell is a label (branch; i_1..i_n). Cells of one depth are
indexed 0-based in lexicographic order, so the children of cell c at a
depth deeper by s are c * 2^s + j for j < 2^s. Every cell of depth n has
measure (r/q) 2^-n.

The tower solves f = g o T - g level by level. f is written as a sum of
increments h_k = f_{n_k} - f_{n_{k-1}} of conditional averages. Each level
refines the previous cycle of cells. Inside every old cell the new
sub-cells are threaded by Kwapien permutations, and the threads are
stitched together in Steinitz order of their totals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .core.functions import StepFunction
from .core.iet import IntervalExchange
from .core.norms import FLOAT_TOLERANCE, Norm, NormValue, within
from .core.vectors import RationalVector, as_rational, vector_sum
from .errors import BoundViolated, InvalidInstance, NotMeanZero
from .selection import VectorMatrix, kwapien_constant, kwapien_permutations
from .steinitz import steinitz_rearrange


def recode_address(digits: Sequence[int]) -> int:
    """phi(i_1..i_m) = 1 + sum_k 2^(k-1) (i_k - 1), a bijection {1,2}^m -> 1..2^m."""
    out = 1
    for k, i in enumerate(digits):
        if i not in (1, 2):
            raise InvalidInstance(f"digit {i!r} is not 1 or 2")
        out += (i - 1) << k
    return out


def decode_address(index: int, m: int) -> tuple:
    """Inverse of recode_address for words of length m."""
    if not 1 <= index <= 2 ** m:
        raise InvalidInstance(f"{index} is outside 1..{2 ** m}")
    k = index - 1
    return tuple(((k >> b) & 1) + 1 for b in range(m))


@dataclass(frozen=True)
class CantorLabel:
    """A cylinder: branch in 1..q and binary digits in {1, 2}."""

    branch: int
    digits: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))
        if self.branch < 1:
            raise InvalidInstance("branch labels start at 1")
        if any(i not in (1, 2) for i in self.digits):
            raise InvalidInstance("digits must be 1 or 2")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def index(self) -> int:
        """0-based lexicographic position among cells of the same depth."""
        out = self.branch - 1
        for i in self.digits:
            out = 2 * out + (i - 1)
        return out

    @classmethod
    def from_index(cls, index: int, depth: int) -> "CantorLabel":
        digits = []
        for _ in range(depth):
            digits.append(index % 2 + 1)
            index //= 2
        return cls(index + 1, tuple(reversed(digits)))

    def measure(self, q: int, r) -> Fraction:
        return as_rational(r) / q / 2 ** self.depth

    def __str__(self):
        return f"({self.branch};{''.join(map(str, self.digits))})"


@dataclass(frozen=True)
class CantorStep:
    """A function on C(q, r) constant on the cells of a fixed depth."""

    q: int
    r: Fraction
    depth: int
    values: tuple

    def __post_init__(self):
        r = as_rational(self.r)
        vals = tuple(v if isinstance(v, RationalVector) else RationalVector(v) for v in self.values)
        if self.q < 1 or self.depth < 0:
            raise InvalidInstance("need q >= 1 and depth >= 0")
        if r <= 0:
            raise InvalidInstance("total measure r must be positive")
        if len(vals) != self.q * 2 ** self.depth:
            raise InvalidInstance(f"expected {self.q * 2 ** self.depth} values, got {len(vals)}")
        if len({len(v) for v in vals}) != 1:
            raise InvalidInstance("values must share one dimension")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, q: int, r, depth: int, fn: Callable[[CantorLabel], object]) -> "CantorStep":
        return cls(q, as_rational(r), depth,
                   tuple(fn(CantorLabel.from_index(c, depth)) for c in range(q * 2 ** depth)))

    @property
    def dim(self) -> int:
        return len(self.values[0])

    @property
    def cells(self) -> int:
        return len(self.values)

    def cell_measure(self) -> Fraction:
        return self.r / self.q / 2 ** self.depth

    def mean(self) -> RationalVector:
        """Integral against mu (total mass r)."""
        return vector_sum(list(self.values)) * self.cell_measure()

    def sup_norm(self, norm: Norm) -> NormValue:
        return norm.max_of(self.values)

    def branch_values(self, branch: int) -> tuple:
        """Values on the cells of 1-based ``branch``."""
        w = 2 ** self.depth
        return self.values[(branch - 1) * w: branch * w]

    def diameter(self, norm: Norm, branch: int) -> NormValue:
        vals = list(dict.fromkeys(self.branch_values(branch)))
        best = norm.zero()
        for i, u in enumerate(vals):
            for v in vals[i + 1:]:
                nv = norm(u - v)
                if nv > best:
                    best = nv
        return best

    def max_diameter(self, norm: Norm) -> NormValue:
        return max((self.diameter(norm, b) for b in range(1, self.q + 1)), default=norm.zero())

    def coarsen(self, level: int) -> "CantorStep":
        return coarsen(self, level)

    def refine(self, depth: int) -> "CantorStep":
        """The same function written on the cells of a deeper level."""
        if depth < self.depth:
            raise InvalidInstance("refine needs depth >= current depth")
        w = 2 ** (depth - self.depth)
        return CantorStep(self.q, self.r, depth, tuple(v for v in self.values for _ in range(w)))

    def __sub__(self, other: "CantorStep") -> "CantorStep":
        depth = max(self.depth, other.depth)
        a, b = self.refine(depth), other.refine(depth)
        return CantorStep(self.q, self.r, depth, tuple(x - y for x, y in zip(a.values, b.values)))

    def __add__(self, other: "CantorStep") -> "CantorStep":
        depth = max(self.depth, other.depth)
        a, b = self.refine(depth), other.refine(depth)
        return CantorStep(self.q, self.r, depth, tuple(x + y for x, y in zip(a.values, b.values)))


def coarsen(f: CantorStep, level: int) -> CantorStep:
    """Conditional average of f on the cells of depth ``level``."""
    if not 0 <= level <= f.depth:
        raise InvalidInstance(f"level must lie in 0..{f.depth}")
    w = 2 ** (f.depth - level)
    vals = tuple(vector_sum(list(f.values[c * w:(c + 1) * w])) / w for c in range(f.cells // w))
    return CantorStep(f.q, f.r, level, vals)


def cascade_constant(d: int) -> float:
    """C_V with the Steinitz constant replaced by its certified surrogate d."""
    return kwapien_constant(d) * (d + 1)


def proof_schedule(f: CantorStep, norm: Norm = Norm.L2) -> list:
    """Levels 0 = n_0 < n_1 < ... ending at f.depth.

    n_k is the least n > n_{k-1} with ||f_n' - f|| <= 2^(-k-2) a ||f|| / C_V
    for every n' >= n. Once f_n = f exactly, the schedule jumps to f.depth.
    """
    norm = Norm.parse(norm)
    if f.depth == 0:
        return [0]
    cv = cascade_constant(f.dim)
    diam = float(f.max_diameter(norm))  # a ||f||
    errors = [f.refine(f.depth) - coarsen(f, n).refine(f.depth) for n in range(f.depth + 1)]
    err = [float(e.sup_norm(norm)) for e in errors]
    tail = [max(err[n:]) for n in range(f.depth + 1)]
    levels = [0]
    k = 1
    while levels[-1] < f.depth:
        target = 2.0 ** (-k - 2) * diam / cv
        n = next(n for n in range(levels[-1] + 1, f.depth + 1)
                 if tail[n] <= target or n == f.depth)
        if tail[n] == 0:
            n = f.depth
        levels.append(n)
        k += 1
    return levels


@dataclass(frozen=True)
class TowerLevel:
    depth: int
    cycle: tuple  # cells of this depth in cycle order, starting at the start cell
    h: tuple  # h_k on the cells of this depth (lex order)
    g: tuple  # g_k on the cells of this depth (lex order)
    h_norm: NormValue
    g_norm: NormValue
    perms: tuple = ()  # Kwapien permutations used (empty at level 0)
    stitch: tuple = ()  # Steinitz order of the thread totals (empty at level 0)

    def successor(self) -> tuple:
        succ = [0] * len(self.cycle)
        for a, b in zip(self.cycle, self.cycle[1:] + self.cycle[:1]):
            succ[a] = b
        return tuple(succ)


@dataclass(frozen=True)
class TowerSolution:
    q: int
    r: Fraction
    norm: Norm
    levels: tuple
    T_final: tuple  # successor map on the deepest cells
    g_final: CantorStep
    C_V: float
    f_norm: NormValue
    max_diameter: NormValue  # a * ||f||
    g_norm: NormValue
    start_norm: NormValue  # sup of |g| on the branch X_1 containing the start cell
    branch_cycle: tuple  # 1-based branches X_1, ..., X_q in the order T visits them
    checks: dict = field(default_factory=dict)

    @property
    def a(self) -> float:
        return float(self.max_diameter) / float(self.f_norm) if self.f_norm else 0.0

    @property
    def global_bound(self) -> float:
        d = self.g_final.dim
        return d * float(self.f_norm) + (1 + self.C_V) * float(self.max_diameter)

    @property
    def start_bound(self) -> float:
        return (1 + self.C_V) * float(self.max_diameter)

    def ok(self) -> bool:
        """All verified properties hold (the schedule flag is a hypothesis, not a check)."""
        return all(v for k, v in self.checks.items() if k != "schedule")


def _cycle_values(cycle, h, d):
    """Partial sums of h along the cycle, starting from 0 at the first cell."""
    g = [None] * len(cycle)
    acc = RationalVector.zero(d)
    for c in cycle:
        g[c] = acc
        acc = acc + h[c]
    return g


def build_tower(f: CantorStep, levels: Sequence[int] | None = None,
                norm: Norm = Norm.L2) -> TowerSolution:
    """Solve f = g o T - g on the deepest cells of f, level by level.

    ``levels`` must increase from 0; f.depth is appended if missing. With the
    default (the proof's schedule) the global and start-cell bounds are
    guaranteed and their failure raises BoundViolated; for other schedules
    they are reported in ``checks`` only.
    """
    norm = Norm.parse(norm)
    m = f.mean()
    if not m.is_zero():
        raise NotMeanZero(m)
    if levels is None:
        levels = proof_schedule(f, norm)
    levels = list(levels)
    if not levels or levels[0] != 0 or any(a >= b for a, b in zip(levels, levels[1:])):
        raise InvalidInstance("levels must start at 0 and increase strictly")
    if levels[-1] > f.depth:
        raise InvalidInstance(f"levels exceed the depth {f.depth} of f")
    if levels[-1] != f.depth:
        levels.append(f.depth)
    d = f.dim
    cv = cascade_constant(d)
    coarse = [coarsen(f, n) for n in levels]
    hs = [coarse[0]] + [coarse[k] - coarse[k - 1] for k in range(1, len(levels))]

    built = []
    h0 = hs[0].values
    cycle = tuple(steinitz_rearrange(list(h0), norm).permutation)
    g0 = _cycle_values(cycle, h0, d)
    built.append(TowerLevel(0, cycle, tuple(h0), tuple(g0), norm.max_of(h0), norm.max_of(g0)))
    for k in range(1, len(levels)):
        step = 2 ** (levels[k] - levels[k - 1])
        h = hs[k].values
        rows = [[h[c * step + j] for j in range(step)] for c in cycle]
        fam = kwapien_permutations(VectorMatrix(tuple(map(tuple, rows)), norm))
        totals = [vector_sum([rows[i][fam.perms[i][j]] for i in range(len(rows))])
                  for j in range(step)]
        stitch = steinitz_rearrange(totals, norm).permutation
        cycle = tuple(c * step + fam.perms[i][t]
                      for t in stitch for i, c in enumerate(cycle))
        g = _cycle_values(cycle, h, d)
        built.append(TowerLevel(levels[k], cycle, tuple(h), tuple(g), norm.max_of(h),
                                norm.max_of(g), fam.perms, tuple(stitch)))

    final = built[-1]
    T = final.successor()
    g_total = [RationalVector.zero(d)] * f.cells
    for lv in built:
        w = 2 ** (f.depth - lv.depth)
        g_total = [acc + lv.g[c // w] for c, acc in enumerate(g_total)]
    g_final = CantorStep(f.q, f.r, f.depth, tuple(g_total))
    f_norm = f.sup_norm(norm)
    diam = f.max_diameter(norm)
    g_norm = g_final.sup_norm(norm)
    start_branch = built[0].cycle[0]
    start_norm = norm.max_of(g_final.branch_values(start_branch + 1))

    sol = TowerSolution(
        q=f.q, r=f.r, norm=norm, levels=tuple(built), T_final=T, g_final=g_final, C_V=cv,
        f_norm=f_norm, max_diameter=diam, g_norm=g_norm, start_norm=start_norm,
        branch_cycle=tuple(b + 1 for b in built[0].cycle))
    checks = check_tower(sol, f)
    sol.checks.update(checks)
    guaranteed = [key for key in checks if key not in ("global_bound", "start_bound", "schedule")]
    if checks["schedule"]:
        guaranteed += ["global_bound", "start_bound"]
    failed = [key for key in guaranteed if not checks[key]]
    if failed:
        raise BoundViolated(f"tower checks failed: {', '.join(failed)}")
    return sol


def check_tower(sol: TowerSolution, f: CantorStep, tol: float = FLOAT_TOLERANCE) -> dict:
    """Recheck the tower conditions, the residual and the norm bounds from scratch."""
    norm = sol.norm
    out = {}
    lv = sol.levels
    # every T_k is one cycle through all cells of its depth
    out["single_cycles"] = all(sorted(L.cycle) == list(range(f.q * 2 ** L.depth)) for L in lv)
    # T_{k+1} maps a child of I into a child of T_k(I)
    ok = True
    for A, B in zip(lv, lv[1:]):
        w = 2 ** (B.depth - A.depth)
        sa, sb = A.successor(), B.successor()
        ok = ok and all(sb[c] // w == sa[c // w] for c in range(len(sb)))
    out["refinement"] = ok
    # ||g_k|| <= C_V ||h_k||
    out["level_bounds"] = all(within(norm.max_of(L.g), float(norm.max_of(L.h)) * sol.C_V, tol)
                              for L in lv)
    # constancy holds by representation: g_k is stored per cell of depth n_k
    out["constant_on_cells"] = all(len(L.g) == f.q * 2 ** L.depth for L in lv)
    # h_k = g_k o T - g_k on every deepest cell, using the final T
    T = sol.T_final
    ok = True
    for L in lv:
        w = 2 ** (f.depth - L.depth)
        ok = ok and all(L.g[T[c] // w] - L.g[c // w] == L.h[c // w] for c in range(f.cells))
    out["level_equations"] = ok
    # telescoping: sum_k h_k = f on the deepest cells
    out["telescoping"] = all(
        vector_sum([L.h[c // 2 ** (f.depth - L.depth)] for L in lv]) == f.values[c]
        for c in range(f.cells))
    g = sol.g_final.values
    out["residual_zero"] = all(f.values[c] == g[T[c]] - g[c] for c in range(f.cells))
    # the branch order X_1..X_q is respected by T
    branch = 2 ** f.depth
    nxt = {b: sol.branch_cycle[(i + 1) % f.q] for i, b in enumerate(sol.branch_cycle)}
    out["branch_cycle"] = all(T[c] // branch + 1 == nxt[c // branch + 1] for c in range(f.cells))
    out["start_zero_level0"] = lv[0].g[lv[0].cycle[0]].is_zero()
    out["global_bound"] = within(sol.g_norm, sol.global_bound, tol)
    out["start_bound"] = within(sol.start_norm, sol.start_bound, tol)
    # the proof's hypotheses on the increments, which make the last two bounds certain
    diam = float(sol.max_diameter)
    sched = True
    for k, L in enumerate(lv[1:], start=1):
        limit = diam if k == 1 else 2.0 ** (-k) * diam / sol.C_V
        sched = sched and float(L.h_norm) <= limit + tol
    out["schedule"] = sched
    return out


def tower_to_interval_exchange(sol: TowerSolution, f: CantorStep) -> tuple:
    """Lay the deepest cells on [0,1) as equal intervals in lexicographic order.

    Returns (f_hat, g_hat, T_hat) with T_hat translating interval c onto
    interval T(c).
    """
    f_hat = StepFunction.equal_intervals(list(f.values))
    g_hat = StepFunction.equal_intervals(list(sol.g_final.values))
    T_hat = IntervalExchange.from_permutation(list(sol.T_final))
    return f_hat, g_hat, T_hat


__all__ = [
    "CantorLabel", "CantorStep", "TowerLevel", "TowerSolution", "recode_address",
    "decode_address", "coarsen", "proof_schedule", "build_tower", "check_tower",
    "tower_to_interval_exchange", "cascade_constant",
]
