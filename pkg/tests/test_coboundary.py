from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homological.coboundary import (browder_profile, convergent_denominators, diophantine_signed,
                                    discrete_residual, simplex_counterexample, simplex_vertices,
                                    solve_discrete, solve_equal_intervals, verify_browder,
                                    verify_solution)
from homological.core import (DiscreteFunction, IntervalExchange, Norm, RationalVector,
                              StepFunction, vec)
from homological.errors import NotMeanZero, SearchExhausted, UnequalIntervals
from homological.instances import random_step

from conftest import zero_sum_families

F = Fraction


def _single_cycle(sigma):
    seen, i = set(), 0
    while i not in seen:
        seen.add(i)
        i = sigma[i]
    return len(seen) == len(sigma)


class TestDiscrete:
    def test_zero(self):
        sol = solve_discrete(DiscreteFunction((vec(0),) * 4))
        assert sol.sigma == (1, 2, 3, 0)
        assert all(v.is_zero() for v in sol.g.values)

    def test_pair(self):
        sol = solve_discrete(DiscreteFunction((vec(1), vec(-1))), Norm.L1)
        assert sol.sigma == (1, 0)
        assert sol.g.values == (vec(0), vec(1))
        assert sol.certified_bound == 1

    def test_not_mean_zero(self):
        with pytest.raises(NotMeanZero) as info:
            solve_discrete(DiscreteFunction((vec(1), vec(1))))
        assert info.value.mean == vec(1)

    def test_four_planar(self):
        f = DiscreteFunction((vec(1, 0), vec(0, 1), vec(-1, 0), vec(0, -1)))
        sol = solve_discrete(f, Norm.L2)
        assert all(r.is_zero() for r in discrete_residual(f, sol.g, sol.sigma))
        assert sol.certified_bound <= sol.f_norm * 2

    @given(zero_sum_families(n_max=9))
    def test_exact_and_bounded(self, vs):
        f = DiscreteFunction(tuple(vs))
        for norm in Norm:
            sol = solve_discrete(f, norm)
            assert _single_cycle(sol.sigma)
            assert all(r.is_zero() for r in discrete_residual(f, sol.g, sol.sigma))
            assert sol.g[sol.start].is_zero()
            assert sol.certified_bound <= sol.f_norm * f.dim


class TestStep:
    def test_halves(self):
        v = vec(2, -1)
        f = StepFunction.equal_intervals([v, -v])
        sol = solve_equal_intervals(f)
        assert set(sol.g.values) == {v, RationalVector.zero(2)}
        assert not verify_solution(f, sol.g, sol.T)

    def test_three(self):
        f = StepFunction.equal_intervals([vec(2), vec(-1), vec(-1)])
        sol = solve_equal_intervals(f, Norm.L1)
        assert not verify_solution(f, sol.g, sol.T, Norm.L1)

    def test_unequal(self):
        f = StepFunction((0, F(1, 3), 1), (vec(2), vec(-1)))
        with pytest.raises(UnequalIntervals):
            solve_equal_intervals(f)

    @given(st.integers(0, 10 ** 6))
    def test_random_six(self, seed):
        f = random_step(seed, 6, 2)
        sol = solve_equal_intervals(f)
        assert not verify_solution(f, sol.g, sol.T)
        assert sol.certified_bound <= f.sup_norm(Norm.L2) * 2

    def test_perturbation_detected(self):
        f = random_step(4, 5, 2)
        sol = solve_equal_intervals(f)
        bump = vec(F(1, 7), 0)
        g = StepFunction(sol.g.breakpoints, (sol.g.values[0] + bump,) + sol.g.values[1:])
        assert verify_solution(f, g, sol.T) >= Norm.L2(bump)

    def test_zero_trivial(self):
        z = StepFunction.constant(vec(0, 0))
        T = IntervalExchange.from_permutation([2, 0, 1])
        assert not verify_solution(z, z, T)


class TestBrowder:
    @given(st.integers(0, 10 ** 6), st.sampled_from(list(Norm)))
    def test_within_twice_g(self, seed, norm):
        f = random_step(seed, 5, 2)
        sol = solve_equal_intervals(f, norm)
        assert verify_browder(f, sol.T, [(0, 1)], 20, norm) <= sol.certified_bound * 2

    def test_linear_growth(self):
        f = StepFunction.constant(vec(1, 0))
        prof = browder_profile(f, IntervalExchange.identity(), [(0, 1)], 6)
        assert prof == [Norm.L2(vec(k + 1, 0)) for k in range(7)]

    def test_start_cells(self):
        f = random_step(9, 6, 2)
        sol = solve_equal_intervals(f, Norm.LINF)
        s = sol.discrete.start
        X = [(F(s, 6), F(s + 1, 6))]
        assert verify_browder(f, sol.T, X, 24, Norm.LINF) <= f.sup_norm(Norm.LINF) * 2


class TestCounterexample:
    def test_vertices_sum_to_zero(self):
        for d in (2, 4, 8, 16):
            assert sum(simplex_vertices(d), RationalVector.zero(d)).is_zero()

    def test_d2(self):
        rep = simplex_counterexample(1)
        assert (rep.d, rep.norm_sq, rep.min_half_sum_norm_sq) == (2, F(1, 2), F(1, 2))

    def test_d4(self):
        rep = simplex_counterexample(2)
        assert rep.norm_sq == F(3, 4) and rep.min_half_sum_norm_sq == 1
        assert rep.checked_multisets == 10

    def test_growth(self):
        mins = [simplex_counterexample(n).min_half_sum_norm for n in range(2, 7)]
        assert mins == sorted(mins) and len(set(mins)) == len(mins)


class TestDiophantine:
    def test_silver(self):
        res = diophantine_signed([F("0.41421356")], vec(1), F(1, 10), 1000)
        assert (res.q, res.p) == (12, (5,))
        assert res.w[0] > 0 and abs(res.w[0]) < F(1, 10) / 12

    def test_flipped(self):
        res = diophantine_signed([F("0.41421356")], vec(-1), F(1, 10), 1000)
        assert res.w[0] < 0 and res.w.dot(vec(-1)) > 0

    def test_huge_eps(self):
        x = [F(1, 3), F(-5, 4)]
        res = diophantine_signed(x, vec(1, -1), F(2 * 50), 50)
        assert res.q == 1 and res.p == (1, -2)

    def test_exhausted(self):
        with pytest.raises(SearchExhausted):
            diophantine_signed([F(1, 2)], vec(1), F(1, 100), 3)

    def test_convergents(self):
        assert convergent_denominators(F(355, 113), 200)[:3] == [1, 7, 113]

    @given(st.lists(st.fractions(0, 1, max_denominator=997), min_size=1, max_size=3),
           st.integers(0, 10 ** 6))
    def test_contract(self, x, seed):
        v = vec(*[(-1) ** (seed >> i & 1) * (i + 1) for i in range(len(x))])
        try:
            res = diophantine_signed(x, v, F(1, 4), 5000)
        except SearchExhausted:
            return
        assert max(abs(a) for a in res.w) < F(1, 4) / res.q
        assert res.w.dot(v) > 0
        assert all(res.w[i] == F(res.p[i], res.q) - x[i] for i in range(len(x)))
