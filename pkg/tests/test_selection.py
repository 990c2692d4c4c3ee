import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homological.core import Norm, vec
from homological.errors import ConvexHullViolation, RowNotMeanZero
from homological.instances import random_matrix, random_scalar_matrix
from homological.selection import (VectorMatrix, bg_select, centering, family_deviations,
                                   kwapien_constant, kwapien_oracle, kwapien_permutations,
                                   kwapien_scalar, kwapien_split_general, kwapien_split_zero,
                                   prefix_selection_norms, selection_oracle, split_deviations)

F = Fraction


def scalar(rows):
    return VectorMatrix(tuple(tuple(vec(a) for a in r) for r in rows), Norm.L1)


def three_way():
    s = F(866025, 1000000)
    return [vec(1, 0), vec(F(-1, 2), s), vec(F(-1, 2), -s)]


class TestSelection:
    def test_all_zero(self):
        sel = bg_select([[vec(0, 0)]] * 3)
        assert not sel.achieved_bound

    def test_signs(self):
        sets = [[vec(1), vec(-1)]] * 6
        sel = bg_select(sets, Norm.L1)
        norms = prefix_selection_norms(sel.vectors, Norm.L1)
        assert max(norms) <= 1
        opt, _ = selection_oracle(sets, Norm.L1)
        assert opt <= max(norms) <= 2

    def test_three_way_sets(self):
        sets = [three_way()] * 5
        sel = bg_select(sets, Norm.L2)
        assert sel.achieved_bound <= 4
        opt, witness = selection_oracle(sets, Norm.L2)
        assert opt <= sel.achieved_bound

    def test_hull_violation(self):
        with pytest.raises(ConvexHullViolation):
            bg_select([[vec(1, 0), vec(2, 1)]])

    @given(st.integers(0, 10 ** 6), st.integers(1, 3), st.sampled_from(list(Norm)))
    def test_bound_holds(self, seed, d, norm):
        mx = random_matrix(seed, 6, 4, d, norm, zero_rows=True)
        sets = [list(r) for r in mx.entries]
        sel = bg_select(sets, norm)
        assert max(prefix_selection_norms(sel.vectors, norm)) == sel.achieved_bound
        assert sel.achieved_bound <= mx.max_entry_norm() * (2 * d)

    @given(st.integers(0, 10 ** 6), st.integers(1, 5))
    def test_scale_invariance(self, seed, c):
        mx = random_matrix(seed, 5, 3, 2, Norm.LINF, zero_rows=True)
        a = bg_select([list(r) for r in mx.entries], Norm.LINF)
        b = bg_select([[v * c for v in r] for r in mx.entries], Norm.LINF)
        assert a.indices == b.indices


class TestScalar:
    def test_zero_rows(self):
        fam = kwapien_scalar(scalar([[0, 0], [0, 0]]))
        assert fam.perms == ((0, 1), (0, 1)) and not fam.achieved_bound

    def test_two_rows(self):
        fam = kwapien_scalar(scalar([[1, -1], [1, -1]]))
        assert fam.perms == ((0, 1), (1, 0))
        assert fam.achieved_bound <= 1

    def test_rejects_nonzero_rows(self):
        with pytest.raises(RowNotMeanZero):
            kwapien_scalar(scalar([[1, 1]]))

    @given(st.integers(0, 10 ** 6))
    def test_random_5x6(self, seed):
        mx = random_scalar_matrix(seed, 5, 6)
        fam = kwapien_scalar(mx)
        devs = family_deviations(mx, fam.perms)
        assert max(max(r) for r in devs) == fam.achieved_bound <= mx.max_entry_norm() * 2

    def test_against_exhaustive(self):
        for seed in range(30):
            mx = random_scalar_matrix(seed, 3, 3)
            fam = kwapien_scalar(mx)
            opt, witness = kwapien_oracle(mx)
            assert opt <= fam.achieved_bound <= mx.max_entry_norm() * 2


class TestSplits:
    def test_whole_row(self):
        mx = random_matrix(3, 3, 4, 2, zero_rows=True)
        res = kwapien_split_zero(mx, 4)
        assert all(s == (0, 1, 2, 3) for s in res.subsets) and not res.achieved_bound

    def test_scalar_singletons(self):
        mx = scalar([[1, -1], [1, -1], [-1, 1]])
        res = kwapien_split_zero(mx, 1)
        assert res.achieved_bound <= 4
        assert max(split_deviations(mx, res.subsets, False)) == res.achieved_bound

    def test_split_zero_3x4(self):
        mx = random_matrix(11, 3, 4, 2, Norm.L2, zero_rows=True)
        res = kwapien_split_zero(mx, 2)
        assert res.achieved_bound <= mx.max_entry_norm() * 16

    def test_constant_entries(self):
        v = vec(1, 2)
        mx = VectorMatrix(tuple((v,) * 5 for _ in range(3)), Norm.L2)
        res = kwapien_split_general(mx, 2)
        assert not res.achieved_bound

    def test_single_row(self):
        mx = VectorMatrix(((vec(1, 0), vec(0, 1), vec(3, 3)),), Norm.LINF)
        res = kwapien_split_general(mx, 1)
        assert res.achieved_bound <= mx.max_entry_norm() * 8 * 4

    @given(st.integers(0, 10 ** 6), st.integers(1, 3), st.sampled_from(list(Norm)))
    def test_general_4x6(self, seed, d, norm):
        mx = random_matrix(seed, 4, 6, d, norm)
        for p in range(1, 7):
            res = kwapien_split_general(mx, p)
            assert res.achieved_bound <= mx.max_entry_norm() * 8 * d * d

    @given(st.integers(0, 10 ** 6), st.integers(1, 5))
    def test_centering_identity(self, seed, p):
        mx = random_matrix(seed, 4, 5, 2, Norm.L1)
        c = centering(mx)
        assert all(s.is_zero() for s in c.row_sums())
        assert c.max_entry_norm() <= mx.max_entry_norm()
        subsets = [tuple(range(p))] * mx.n
        lhs = split_deviations(mx, subsets, True)
        rhs = split_deviations(c, subsets, False)
        assert lhs == [r * 2 for r in rhs]


class TestPermutations:
    def test_one_column(self):
        mx = VectorMatrix(((vec(1, 1),), (vec(2, -1),)), Norm.L2)
        fam = kwapien_permutations(mx)
        assert fam.perms == ((0,), (0,)) and not fam.achieved_bound

    def test_two_columns_scalar(self):
        mx = scalar([[1, -1], [-1, 1], [1, -1], [F(1, 2), F(-1, 2)]])
        fam = kwapien_permutations(mx)
        assert fam.achieved_bound <= 4

    def test_constant(self):
        assert math.isclose(kwapien_constant(1), 19.7304, abs_tol=1e-4)
        assert math.isclose(kwapien_constant(2), 78.9218, abs_tol=1e-4)

    @given(st.integers(0, 10 ** 6), st.sampled_from(list(Norm)))
    def test_random_4x4(self, seed, norm):
        mx = random_matrix(seed, 4, 4, 2, norm)
        fam = kwapien_permutations(mx)
        for p in fam.perms:
            assert sorted(p) == [0, 1, 2, 3]
        worst = max(max(r) for r in family_deviations(mx, fam.perms))
        assert worst == fam.achieved_bound
        assert float(worst) <= kwapien_constant(2) + 1e-9

    def test_oracle_lower(self):
        mx = random_matrix(5, 3, 3, 2, Norm.L2)
        opt, witness = kwapien_oracle(mx)
        assert witness[0] == (0, 1, 2)
        assert opt <= kwapien_permutations(mx).achieved_bound

    @given(st.integers(0, 10 ** 6), st.permutations(range(4)))
    def test_row_permutation_of_columns(self, seed, pi):
        mx = random_matrix(seed, 3, 4, 1, Norm.L1)
        shuffled = mx.with_rows([tuple(r[j] for j in pi) for r in mx.entries])
        a, _ = kwapien_oracle(mx)
        b, _ = kwapien_oracle(shuffled)
        assert a == b
