import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nuinv import data, harness
from nuinv.arrgmt import (
    Arrangement,
    LineLattice,
    complex_linearized_form,
    cup_structure_constants,
    link_linearized_form,
    linking_from_permutation,
    presentation_linearized_form,
)
from nuinv.exactalg import enumerate_projective, projective_count, rank_mod_p
from nuinv.freegrp import Presentation, Word, commutator
from nuinv.resonance import expected_nu_from_components, hyperplane_cover_check, membership, stratify


def lattice_form(name):
    return complex_linearized_form(data.LATTICES[name])


class TestStratify:
    def test_a3(self):
        assert stratify(lattice_form("A3"), 6, 3).counts.get(1) == 20

    def test_non_fano(self):
        prof = stratify(lattice_form("non-Fano"), 7, 2)
        assert prof.counts == {0: 102, 1: 24, 2: 1}

    def test_maclane(self):
        assert stratify(lattice_form("MacLane"), 8, 3).counts.get(1) == 36

    def test_ag23(self):
        prof = stratify(lattice_form("AG(2,3)"), 9, 3)
        assert (prof.counts.get(1), prof.counts.get(2)) == (48, 13)

    @pytest.mark.parametrize("tau", list(data.TABLE1))
    def test_totals(self, tau):
        lk = linking_from_permutation(tau)
        for p in (2, 3):
            assert stratify(link_linearized_form(lk), lk.n, p).total == projective_count(lk.n, p)

    def test_callable_builder(self):
        form = link_linearized_form(linking_from_permutation("2134"))
        a = stratify(lambda lam: form.evaluate(lam), 4, 3)
        assert a.as_list() == stratify(form, 4, 3).as_list() == [18, 20, 2, 0]

    def test_threads_deterministic(self):
        form = lattice_form("MacLane")
        one = stratify(form, 8, 3, collect_points=True, threads=1)
        many = stratify(form, 8, 3, collect_points=True, threads=3)
        assert one.counts == many.counts and one.strata == many.strata

    def test_compressed_matches_direct(self):
        # the exact rank shortcut must agree with plain elimination
        form = lattice_form("non-Fano")
        prof = stratify(form, 7, 3, collect_points=True)
        for d, pts in prof.strata.items():
            for pt in pts[:40]:
                assert 6 - rank_mod_p(form.evaluate(pt), 3) == d


class TestInvariants:
    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from(sorted(data.TABLE1)), st.data())
    def test_scaling(self, tau, draw):
        p = 7
        form = link_linearized_form(linking_from_permutation(tau))
        lam = draw.draw(st.lists(st.integers(0, p - 1), min_size=len(tau), max_size=len(tau)).filter(any))
        c = draw.draw(st.integers(1, p - 1))
        assert rank_mod_p(form.evaluate(lam), p) == rank_mod_p(form.evaluate([c * x for x in lam]), p)

    @pytest.mark.parametrize("tau", ["2134", "21435", "213456"])
    def test_monotone(self, tau):
        n = len(tau)
        form = link_linearized_form(linking_from_permutation(tau))
        for pt in enumerate_projective(n, 3):
            flags = [membership(pt, d, form) for d in range(n)]
            assert flags[0]
            assert all(a or not b for a, b in zip(flags, flags[1:]))


def subspace_oracle(mu, n, p):
    """d-counts from the maximal dimension of a subspace W with mu(lambda ^ W) = 0."""
    pts = [np.array(pt.coords) for pt in enumerate_projective(n, p)]
    counts = [0] * n
    for lam in pts:
        pair = np.einsum("i,ijk->jk", lam, mu) % p  # w -> mu(lambda ^ w)
        best = 0
        for k in range(1, n + 1):
            for gens in itertools.combinations(pts, k):
                basis = np.array(gens)
                if rank_mod_p(basis, p) == k and not np.any(basis @ pair % p):
                    best = k
                    break
        counts[best - 1] += 1
    return counts


def random_word(rng, n, length):
    return Word(tuple(int(rng.integers(1, n + 1)) * int(rng.choice([1, -1])) for _ in range(length)))


def random_presentation(rng, n):
    rels = []
    for _ in range(rng.integers(1, 4)):
        w = Word()
        for _ in range(rng.integers(1, 4)):
            w = w * commutator(random_word(rng, n, rng.integers(1, 3)), random_word(rng, n, 1))
        rels.append(w)
    return Presentation(n, tuple(rels))


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_subspace_oracle(n, p):
    rng = np.random.default_rng(10 * n + p)
    for _ in range(6):
        g = random_presentation(rng, n)
        mu = cup_structure_constants(g)
        assert stratify(presentation_linearized_form(g), n, p).as_list() == subspace_oracle(mu, n, p)


class TestMembership:
    def test_generic_top(self):
        form = complex_linearized_form(LineLattice(4, ()))
        for pt in enumerate_projective(4, 3):
            assert not membership(pt, 3, form)

    def test_2134_hyperplane(self):
        form = link_linearized_form(linking_from_permutation("2134"))
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b, c = (int(x) for x in rng.integers(0, 101, size=3))
            lam = (a, b, c, (a + b - c) % 101)
            if any(lam):
                assert membership(lam, 1, form, 101)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            membership((0, 0, 0), 0, lattice_form("A3"), 3)

    def test_d0_always(self):
        form = lattice_form("A3")
        assert all(membership(pt, 0, form) for pt in enumerate_projective(6, 2))


class TestPredictions:
    def test_examples(self):
        assert expected_nu_from_components({2: 5}, 3) == {1: 20}
        assert expected_nu_from_components({2: 9}, 5) == {1: 54}
        assert expected_nu_from_components({}, 7) == {}

    @pytest.mark.parametrize("name,m", [("A3", {2: 5}), ("non-Fano", {2: 9}), ("MacLane", {2: 8})])
    def test_linear_components_at_p5(self, name, m):
        n = data.LATTICES[name].n
        got = {d: c for d, c in stratify(lattice_form(name), n, 5).counts.items() if d}
        assert got == expected_nu_from_components(m, 5)


class TestCover:
    def test_1234(self):
        form = link_linearized_form(linking_from_permutation("1234"))
        pts = harness.geometry_samples("1234", 101, 500, 50, 1)
        res = [tuple(pt) for pt in pts if membership(pt, 1, form, 101)]
        assert res and hyperplane_cover_check(res, [(1, 1, 1, 1)], 101) == []

    def test_distinguishes_pair(self):
        pts = {}
        for tau in ("321456", "213456"):
            form = link_linearized_form(linking_from_permutation(tau))
            sample = harness.geometry_samples(tau, 101, 300, 40, 2)
            pts[tau] = [tuple(pt) for pt in sample if membership(pt, 2, form, 101)]
        delta = [(1,) * 6]
        assert hyperplane_cover_check(pts["213456"], delta, 101) == []
        assert hyperplane_cover_check(pts["321456"], delta, 101) != []

    def test_empty_forms(self):
        pts = [(1, 0), (0, 1)]
        assert hyperplane_cover_check(pts, [], 5) == pts

    def test_profile_input(self):
        prof = stratify(link_linearized_form(linking_from_permutation("2134")), 4, 3, collect_points=True)
        assert len(hyperplane_cover_check(prof, [], 3)) == 40


def test_cubic_on_random_points():
    form = Arrangement.from_tau("31425").linearized()
    pts = harness.geometry_samples("31425", 101, 1000, 100, 5)
    mu = harness.to_value_coords(pts, "31425")
    for pt, lam in zip(pts, mu):
        assert membership(pt, 1, form, 101) == (data.eval_polynomial(data.CUBIC_31425, lam, 101) == 0)
