import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nuinv.arrgmt import LinkingMatrix, chi_transpose_matrix, linking_from_permutation
from nuinv.exactalg import AbelianGroupClass
from nuinv.zinv import ExteriorBasis, wedge_multiply, z_invariant, z_matrix, ziegler_invariant


def e(*idx):
    return {tuple(i - 1 for i in idx): 1}


def patterns(n):
    for signs in itertools.product((1, -1), repeat=comb(n, 2)):
        yield LinkingMatrix.from_upper(n, signs)


lk5 = st.lists(st.sampled_from([1, -1]), min_size=10, max_size=10).map(lambda s: LinkingMatrix.from_upper(5, s))


class TestWedge:
    def test_square(self):
        assert wedge_multiply(e(1), e(1), 4) == {}

    def test_antisymmetry(self):
        assert wedge_multiply(e(1), e(2), 4) == e(1, 2)
        assert wedge_multiply(e(2), e(1), 4) == {(0, 1): -1}

    def test_shuffle_sign(self):
        assert wedge_multiply(e(1, 2), e(3, 4), 4) == e(1, 2, 3, 4)
        assert wedge_multiply(e(1, 3), e(2, 4), 4) == {(0, 1, 2, 3): -1}

    def test_degree_overflow(self):
        with pytest.raises(ValueError):
            wedge_multiply(e(1, 2), e(3, 4), 3)

    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    def test_graded_commutative(self, a, b):
        two, one = ExteriorBasis(4, 2), ExteriorBasis(4, 1)
        u, v = two.to_vector(a), one.to_vector(b)
        assert wedge_multiply(u, v, 4) == wedge_multiply(v, u, 4)

    def test_basis_roundtrip(self):
        b = ExteriorBasis(5, 3)
        row = np.arange(len(b))
        assert list(b.to_row(b.to_vector(row))) == list(row)


class TestZ:
    @pytest.mark.parametrize("lk", list(patterns(4)))
    def test_z01_free(self, lk):
        assert z_invariant(0, 1, chi_transpose_matrix(lk), 4) == AbelianGroupClass(3)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(3, 6).flatmap(lambda n: st.lists(st.sampled_from([1, -1]), min_size=comb(n, 2), max_size=comb(n, 2)).map(lambda s: LinkingMatrix.from_upper(n, s))))
    def test_z01_free_random(self, lk):
        assert z_invariant(0, 1, chi_transpose_matrix(lk), lk.n) == AbelianGroupClass(lk.n - 1)

    @pytest.mark.parametrize("lk", list(patterns(4)))
    def test_mirror_n4(self, lk):
        for i, j in [(0, 1), (1, 1), (2, 1), (0, 2)]:
            a = z_invariant(i, j, chi_transpose_matrix(lk), 4)
            assert a == z_invariant(i, j, chi_transpose_matrix(lk.negated()), 4)

    @settings(max_examples=15, deadline=None)
    @given(lk5)
    def test_mirror_n5(self, lk):
        for i, j in [(0, 2), (1, 2), (1, 1)]:
            assert z_invariant(i, j, chi_transpose_matrix(lk), 5) == z_invariant(i, j, chi_transpose_matrix(lk.negated()), 5)

    @settings(max_examples=15, deadline=None)
    @given(lk5, st.randoms(use_true_random=False))
    def test_row_order(self, lk, rnd):
        chi = chi_transpose_matrix(lk)
        order = list(range(len(chi)))
        rnd.shuffle(order)
        assert z_invariant(0, 2, chi, 5) == z_invariant(0, 2, chi[order], 5)

    @settings(max_examples=15, deadline=None)
    @given(lk5)
    def test_functorial(self, lk):
        chi = chi_transpose_matrix(lk)
        two, four = ExteriorBasis(5, 2), ExteriorBasis(5, 4)
        direct = []
        for a, b in itertools.combinations(range(len(chi)), 2):
            v = wedge_multiply(two.to_vector(chi[a]), two.to_vector(chi[b]), 5)
            if v:
                direct.append(list(four.to_row(v)))
        assert z_matrix(0, 2, chi, 5).tolist() == direct

    def test_degree_limits(self):
        chi = chi_transpose_matrix(linking_from_permutation("2134"))
        with pytest.raises(ValueError):
            z_matrix(1, 2, chi, 4)


class TestZiegler:
    @pytest.mark.parametrize(
        "tau,want",
        [("1234", AbelianGroupClass(1)), ("2134", AbelianGroupClass(0, (2,))), ("21435", AbelianGroupClass(0, (2,) * 4)), ("31425", AbelianGroupClass(0, (2,) * 4))],
    )
    def test_examples(self, tau, want):
        assert ziegler_invariant(linking_from_permutation(tau)) == want

    def test_all_positive_n5(self):
        cls = ziegler_invariant(linking_from_permutation("12345"))
        r = len(cls.torsion)
        assert set(cls.torsion) <= {2} and cls.free_rank == comb(4, 3) - r

    @settings(max_examples=25, deadline=None)
    @given(lk5)
    def test_shape(self, lk):
        cls = ziegler_invariant(lk)
        assert set(cls.torsion) <= {2} and cls.free_rank + len(cls.torsion) == comb(4, 3)

    def test_needs_four(self):
        with pytest.raises(ValueError):
            ziegler_invariant(linking_from_permutation("213"))
