from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homological.core import (DiscreteFunction, IntervalExchange, Norm, NormValue, RationalVector,
                              StepFunction, compose, mean, orbit_partial_sums, vec, within)
from homological.core.vectors import as_rational, is_dyadic, primitive_integer_form
from homological.errors import BreakpointHit, InvalidInstance

from conftest import vectors

F = Fraction


class TestRationals:
    def test_string_forms(self):
        assert as_rational("3/4") == F(3, 4)
        assert as_rational(" -2 ") == -2
        assert as_rational("0.125") == F(1, 8)

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            as_rational(0.5)

    def test_dyadic(self):
        assert is_dyadic(F(3, 8)) and not is_dyadic(F(1, 3))

    def test_primitive_form(self):
        assert primitive_integer_form([vec("1/2", "1/3"), vec(1, 0)]) == [(3, 2), (6, 0)]


class TestNorms:
    def test_gauges(self):
        v = vec(3, -4)
        assert Norm.L1(v).exact() == 7
        assert Norm.LINF(v).exact() == 4
        assert Norm.L2(v).exact() == 5

    def test_irrational_l2(self):
        n = Norm.L2(vec(1, 1))
        assert n.exact() is None and n.gauge == 2
        assert abs(float(n) - 2 ** 0.5) < 1e-15

    def test_comparisons_across_powers(self):
        assert Norm.L2(vec(1, 1)) < 2
        assert Norm.L2(vec(1, 1)) > F(7, 5)
        assert Norm.L2(vec(3, 4)) == 5

    def test_scaling(self):
        assert Norm.L2(vec(1, 1)) * 2 == Norm.L2(vec(2, 2))

    def test_within(self):
        assert within(NormValue(2, 2), 2 ** 0.5)
        assert not within(NormValue(3), 2)

    @given(vectors(3), vectors(3))
    def test_triangle(self, a, b):
        for norm in Norm:
            assert float(norm(a + b)) <= float(norm(a)) + float(norm(b)) + 1e-12


class TestStepFunction:
    def test_partition_checked(self):
        with pytest.raises(InvalidInstance):
            StepFunction((0, F(1, 2)), (vec(1),))
        with pytest.raises(InvalidInstance):
            StepFunction((0, F(1, 2), F(1, 2), 1), (vec(1), vec(2), vec(3)))

    def test_mean_weighted(self):
        f = StepFunction((0, F(1, 3), 1), (vec(1), vec("-1/2")))
        assert mean(f) == vec(0)

    def test_mean_constant(self):
        assert StepFunction.constant(vec(2, 3)).mean() == vec(2, 3)

    def test_evaluation(self):
        f = StepFunction.equal_intervals([vec(1), vec(2)])
        assert f(F(1, 2)) == vec(2) and f(0) == vec(1)


class TestIntervalExchange:
    def test_identity_composition(self):
        f = StepFunction.equal_intervals([vec(1, 0), vec(0, 1), vec(-1, -1)])
        assert compose(f, IntervalExchange.identity()).values == f.values

    def test_half_swap(self):
        v = vec(1, 2)
        f = StepFunction.equal_intervals([v, -v])
        g = compose(f, IntervalExchange.from_permutation([1, 0]))
        assert g.values == (-v, v)

    def test_quarter_shift(self):
        vals = [vec(k) for k in (1, 2, 3, 4)]
        f = StepFunction.equal_intervals(vals)
        T = IntervalExchange.rotation(F(1, 4))
        g = compose(f, T)
        assert [g(F(2 * k + 1, 8)) for k in range(4)] == vals[1:] + vals[:1]

    def test_not_a_partition(self):
        with pytest.raises(InvalidInstance):
            IntervalExchange(((0, F(1, 2), F(1, 2)), (F(1, 2), 1, F(-1, 4))))

    def test_inverse_and_power(self):
        T = IntervalExchange.from_permutation([2, 0, 3, 1])
        assert (T @ T.inverse()).is_identity()
        assert T.power(4).is_identity()
        assert T.total_length() == 1

    def test_orbit_sums_two_point(self):
        f = StepFunction.equal_intervals([vec(1), vec(-1)])
        T = IntervalExchange.from_permutation([1, 0])
        sums = orbit_partial_sums(f, T, F(1, 4), 5)
        assert sums == [vec(1), vec(0)] * 3

    def test_orbit_fixed_point(self):
        f = StepFunction.constant(vec(1, -1))
        sums = orbit_partial_sums(f, IntervalExchange.identity(), F(1, 3), 4)
        assert sums == [vec(1, -1) * (k + 1) for k in range(5)]

    def test_orbit_refuses_breakpoint(self):
        f = StepFunction.equal_intervals([vec(1), vec(-1)])
        with pytest.raises(BreakpointHit):
            orbit_partial_sums(f, IntervalExchange.identity(), F(1, 2), 2)

    @given(st.permutations(range(5)), st.lists(st.integers(-5, 5), min_size=5, max_size=5))
    def test_compose_matches_pointwise(self, sigma, vals):
        f = StepFunction.equal_intervals([vec(v) for v in vals])
        T = IntervalExchange.from_permutation(sigma)
        g = compose(f, T)
        for k in range(5):
            t = F(2 * k + 1, 10)
            assert g(t) == f(T(t))


def test_discrete_function_total():
    f = DiscreteFunction((vec(1, 2), vec(-1, -2)))
    assert f.total() == RationalVector.zero(2) and f.n == 2
