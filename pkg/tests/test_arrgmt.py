import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nuinv import data
from nuinv.arrgmt import (
    Arrangement,
    DefiningEquations,
    LineLattice,
    LinkingMatrix,
    chi_transpose_matrix,
    complex_linearized_form,
    complex_linearized_matrix,
    cup_structure_constants,
    horizontal_equations,
    link_linearized_form,
    link_linearized_matrix,
    link_presentation,
    linking_from_equations,
    linking_from_permutation,
    presentation_linearized_form,
    validate_lattice,
)
from nuinv.freegrp import Presentation, braid_closure_presentation, commutator, free_group, Word
from nuinv.resonance import stratify


class TestLattice:
    def test_betti_a3(self):
        assert validate_lattice(data.LATTICES["A3"]) == (6, 11)

    def test_betti_generic(self):
        assert validate_lattice(LineLattice(4, ())) == (4, 6)

    def test_betti_non_fano(self):
        assert validate_lattice(data.LATTICES["non-Fano"]) == (7, 15)

    def test_implicit_double_points(self):
        lat = LineLattice(4, ((1, 2, 3),))
        assert sorted(lat.all_flats) == [(1, 2, 3), (1, 4), (2, 4), (3, 4)]

    def test_rejects_two_shared_lines(self):
        with pytest.raises(ValueError):
            LineLattice(4, ((1, 2, 3), (1, 2, 4)))

    def test_rejects_inconsistent_pair(self):
        with pytest.raises(ValueError):
            LineLattice(3, ((1, 2, 3), (1, 2)))


class TestComplexMatrix:
    def test_single_flat(self):
        m = complex_linearized_matrix(LineLattice(3, ((1, 2, 3),)), (1, 0, 0), 3)
        assert m.tolist() == [[0, 1, 1], [0, 2, 0]]

    def test_double_point_rows(self):
        lam = (2, 3, 5, 7)
        m = complex_linearized_matrix(LineLattice(4, ()), lam, 101)
        # block of {1, 2}: row (-lambda_2, lambda_1, 0, 0)
        assert m[0].tolist() == [-3 % 101, 2, 0, 0]

    @pytest.mark.parametrize("name", list(data.LATTICES))
    def test_annihilates_lambda(self, name):
        form = complex_linearized_form(data.LATTICES[name])
        assert form.annihilates_argument
        rng = np.random.default_rng(1)
        for lam in rng.integers(-50, 50, size=(100, form.n)):
            assert not np.any(form.evaluate(lam) @ lam)


lk_strategy = st.integers(3, 6).flatmap(
    lambda n: st.lists(st.sampled_from([1, -1]), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(
        lambda e: LinkingMatrix.from_upper(n, e)
    )
)


class TestLinking:
    def test_identity_all_positive(self):
        lk = linking_from_permutation("12345")
        assert all(lk.l[i][j] == 1 for i in range(5) for j in range(5) if i != j)

    def test_2134(self):
        lk = linking_from_permutation("2134")
        off = {(i, j): lk.l[i][j] for i in range(4) for j in range(4) if i < j}
        assert off.pop((0, 1)) == -1
        assert set(off.values()) == {1}

    @pytest.mark.parametrize("tau", list(data.TABLE1))
    def test_reversal_mirrors(self, tau):
        n = len(tau)
        flipped = "".join(str(n + 1 - int(c)) for c in tau)
        lk = linking_from_permutation(tau)
        assert linking_from_permutation(flipped) == lk.negated()
        # reading tau backwards also reverses the plane order
        back = linking_from_permutation(tau[::-1]).array()[::-1, ::-1]
        assert np.array_equal(back, -lk.array())

    def test_symmetric(self):
        a = linking_from_permutation("31425").array()
        assert np.array_equal(a, a.T)

    def test_bad_permutation(self):
        with pytest.raises(ValueError):
            linking_from_permutation("1224")

    def test_equations_basic(self):
        e1 = ((1, 0, 0, 0), (0, 1, 0, 0))
        e2 = ((0, 0, 1, 0), (0, 0, 0, 1))
        assert linking_from_equations(DefiningEquations((e1, e2))).l[0][1] == 1
        swapped = ((0, 0, 0, 1), (0, 0, 1, 0))
        assert linking_from_equations(DefiningEquations((e1, swapped))).l[0][1] == -1

    def test_equations_not_transverse(self):
        e1 = ((1, 0, 0, 0), (0, 1, 0, 0))
        with pytest.raises(ValueError):
            linking_from_equations(DefiningEquations((e1, e1)))

    @pytest.mark.parametrize("tau", list(data.TABLE1))
    def test_equations_agree_with_permutation(self, tau):
        assert linking_from_equations(horizontal_equations(tau)) == linking_from_permutation(tau)

    def test_link_matrix_n2(self):
        for l in (1, -1):
            lk = LinkingMatrix.from_upper(2, [l])
            assert link_linearized_matrix(lk, (1, 0), 5).tolist() == [[0, l % 5]]

    @settings(max_examples=40, deadline=None)
    @given(lk_strategy, st.data())
    def test_link_annihilates_lambda(self, lk, draw):
        lam = np.array(draw.draw(st.lists(st.integers(-20, 20), min_size=lk.n, max_size=lk.n)))
        assert not np.any(link_linearized_form(lk).evaluate(lam) @ lam)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_all_positive_is_pencil(self, p):
        for n in (3, 4, 5):
            lk = linking_from_permutation(range(1, n + 1))
            pencil = LineLattice(n, (tuple(range(1, n + 1)),))
            a = stratify(link_linearized_form(lk), n, p).as_list()
            b = stratify(complex_linearized_form(pencil), n, p).as_list()
            assert a == b
            assert a[n - 2] == (p ** (n - 1) - 1) // (p - 1)

    def test_generic_lambda_full_rank(self):
        lk = linking_from_permutation("31425")
        rng = np.random.default_rng(2)
        form = link_linearized_form(lk)
        full = sum(np.linalg.matrix_rank(form.evaluate(lam, 101).astype(float)) == 4 for lam in rng.integers(1, 101, size=(20, 5)))
        assert full >= 18


class TestChi:
    def test_n3(self):
        lk = LinkingMatrix.from_upper(3, [1, 1, 1])
        # (e1 - e3) ^ (e2 - e3) = e12 - e13 + e23
        assert chi_transpose_matrix(lk).tolist() == [[1, -1, 1]]

    @settings(max_examples=30, deadline=None)
    @given(lk_strategy)
    def test_leading_and_locality(self, lk):
        n = lk.n
        cols = list(itertools.combinations(range(n), 2))
        rows = list(itertools.combinations(range(n - 1), 2))
        chi = chi_transpose_matrix(lk)
        for r, (i, j) in enumerate(rows):
            assert chi[r, cols.index((i, j))] == 1
            flipped = [list(row) for row in lk.l]
            flipped[i][j] = flipped[j][i] = -lk.l[i][j]
            other = chi_transpose_matrix(LinkingMatrix(tuple(map(tuple, flipped))))
            diff = other - chi
            assert set(np.flatnonzero(diff.any(axis=1))) == {r}
            assert np.array_equal(other[r, :], np.where(np.arange(len(cols)) == cols.index((i, j)), 1, -chi[r]))


class TestCup:
    def test_single_relator(self):
        mu = cup_structure_constants(Presentation(2, (commutator(Word.gen(1), Word.gen(2)),)))
        assert mu[0, 1, 0] == 1 and mu[1, 0, 0] == -1

    def test_free(self):
        assert not cup_structure_constants(free_group(3)).any()

    def test_hopf(self):
        mu = cup_structure_constants(braid_closure_presentation("s1^2", 2))
        assert abs(mu[0, 1, 0]) == 1

    @pytest.mark.parametrize(
        "braid,n,links",
        [
            ("s1^2", 3, {(0, 1): 1}),
            ("s1^2 s2^2", 3, {(0, 1): 1, (1, 2): 1}),
            ("s1^-2 s2^4", 3, {(0, 1): -1, (1, 2): 2}),
            ("s1 s2 s1 s2 s1 s2", 3, {(0, 1): 1, (0, 2): 1, (1, 2): 1}),
            ("s2^2 s3^-2 s1^2", 4, {(1, 2): 1, (2, 3): -1, (0, 1): 1}),
        ],
    )
    def test_recovers_linking(self, braid, n, links):
        mu = cup_structure_constants(braid_closure_presentation(braid, n))
        for k in range(n - 1):
            for j in range(n):
                if j != k:
                    want = links.get((min(j, k), max(j, k)), 0)
                    assert -mu[k, j, k] == want

    @pytest.mark.parametrize("tau", ["2134", "31425", "214356"])
    def test_link_presentation_matches_link_matrix(self, tau):
        lk = linking_from_permutation(tau)
        a = presentation_linearized_form(link_presentation(lk))
        b = link_linearized_form(lk)
        rng = np.random.default_rng(0)
        for lam in rng.integers(0, 7, size=(30, lk.n)):
            assert np.linalg.matrix_rank(a.evaluate(lam).astype(float)) == np.linalg.matrix_rank(b.evaluate(lam).astype(float))


def test_arrangement_kinds():
    assert Arrangement("x", data.LATTICES["A3"]).kind == "lattice"
    assert Arrangement.from_tau("2134").kind == "linking"
    assert Arrangement("g", free_group(2)).kind == "presentation"
    assert Arrangement.from_tau("2134").name == "A(2134)"
