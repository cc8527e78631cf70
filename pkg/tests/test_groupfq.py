"""Matrix-group layer: similitude structure, subgroups, closures, classes."""

from __future__ import annotations

import itertools
import random

import pytest

from klingen import ffield, groupfq as gq
from klingen.errors import GroupTooLarge, NotSimilitude, UnknownName
from klingen.ffield import field_for_q


class TestSimilitude:
    def test_j_is_symplectic(self):
        """J itself lies in Sp(4): t(J) J J = J."""
        for q in (2, 3, 4, 5):
            j = gq.j_matrix(field_for_q(q))
            assert gq.similitude(j) == field_for_q(q).one

    def test_weyl_reps_are_symplectic(self):
        for q in (2, 3, 5):
            spec = field_for_q(q)
            for w in gq.weyl_reps(spec):
                assert gq.similitude(w) == spec.one

    def test_root_elements_are_symplectic(self):
        for q in (2, 3, 4, 5):
            spec = field_for_q(q)
            for t in ffield.enumerate_field(spec):
                for i in range(4):
                    assert gq.similitude(gq.pos_root_elem(spec, i, t)) == spec.one
                    assert gq.similitude(gq.neg_root_elem(spec, i, t)) == spec.one

    def test_similitude_diag(self):
        spec = field_for_q(5)
        m = gq.Mat4.diag(spec, 2, 2, 1, 1)
        assert gq.similitude(m) == spec(2)

    def test_not_similitude(self):
        spec = field_for_q(3)
        bad = gq.Mat4.from_rows(
            spec, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        )
        assert gq.similitude(bad) is None
        with pytest.raises(NotSimilitude):
            gq.gsp_elem(bad)

    def test_group_laws_random(self):
        """g * g^{-1} = 1, det g = mu^2, mu multiplicative, on random elements."""
        rng = random.Random(7)
        for q in (2, 3, 4, 5):
            spec = field_for_q(q)
            pool = gq.named_subgroup("Row1", q).elements
            ident = gq.Mat4.identity(spec)
            for _ in range(25):
                g = rng.choice(pool)
                h = rng.choice(pool)
                assert (g * g.inverse()).mat == ident
                assert g.mat.det() == g.mu * g.mu
                assert (g * h).mu == g.mu * h.mu
                assert gq.group_inv(gq.group_mul(g, h)).mat == (
                    h.inverse() * g.inverse()
                ).mat


class TestNamedSubgroups:
    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_orders_match_closed_forms(self, q):
        for name in gq.NAMED_SUBGROUP_NAMES:
            sg = gq.named_subgroup(name, q)
            assert sg.order == gq.named_subgroup_order(name, q), name

    def test_aliases(self):
        for alias, base in (("Row2", "C"), ("Row3", "M"), ("Row4", "B")):
            a = gq.named_subgroup(alias, 3)
            b = gq.named_subgroup(base, 3)
            assert a.same_elements(b)

    def test_unknown_name(self):
        with pytest.raises(UnknownName):
            gq.named_subgroup("Q", 3)

    @pytest.mark.parametrize("q", [2, 3])
    def test_all_named_sets_are_groups(self, q):
        """Scan parameterizations are closed under multiplication and inverse."""
        for name in gq.NAMED_SUBGROUP_NAMES:
            sg = gq.named_subgroup(name, q)
            for g in sg.elements:
                assert g.inverse() in sg, name
            for a in sg.elements:
                for b in sg.elements:
                    assert (a * b) in sg, name

    @pytest.mark.parametrize("q", [4, 5])
    def test_groups_sampled_closure(self, q):
        rng = random.Random(11)
        for name in gq.NAMED_SUBGROUP_NAMES:
            sg = gq.named_subgroup(name, q)
            for _ in range(100):
                a = rng.choice(sg.elements)
                b = rng.choice(sg.elements)
                assert (a * b) in sg, name
                assert a.inverse() in sg, name

    def test_m1_is_m_intersect_r_klingen(self):
        """M1 = M intersected with the Klingen-lemma R (order q(q^2-1))."""
        for q in (2, 3):
            m = gq.named_subgroup("M", q)
            r = gq.named_subgroup("R_klingen", q)
            inter = [g for g in m.elements if g in r]
            m1 = gq.named_subgroup("M1", q)
            assert sorted(g.key() for g in inter) == [g.key() for g in m1.elements]
            assert m1.order == q * (q * q - 1)

    def test_r_last_inside_row8(self):
        for q in (2, 3):
            r = gq.named_subgroup("R_last", q)
            row8 = gq.named_subgroup("Row8", q)
            assert r.is_subset_of(row8)
            assert row8.order == (q - 1) * r.order

    def test_us_uk_orders(self):
        for q in (2, 3, 4, 5):
            assert gq.named_subgroup("U_S", q).order == q**3
            assert gq.named_subgroup("U_K", q).order == q**3

    def test_upper_unipotent(self):
        for q in (2, 3, 4):
            u = gq.upper_unipotent(field_for_q(q))
            assert u.order == q**4


class TestClosure:
    def test_numpy_and_generic_paths_agree(self):
        gens = gq.gsp4_generators(field_for_q(2))
        fast = gq._closure_numpy([g.mat for g in gens], field_for_q(2), 10**6)
        slow = gq._closure_generic([g.mat for g in gens], field_for_q(2), 10**6)
        assert set(fast) == set(slow)
        assert len(fast) == 720

    def test_closure_bound(self):
        from klingen.errors import ClosureTooLarge

        gens = gq.gsp4_generators(field_for_q(3))
        with pytest.raises(ClosureTooLarge):
            gq.subgroup_closure(gens, bound=1000)

    def test_closure_of_scan_is_scan(self):
        for name in ("S", "A", "B", "R_last", "M1", "Row8"):
            sg = gq.named_subgroup(name, 3)
            assert gq.subgroup_closure(sg.elements).same_elements(sg)


class TestFullGroup:
    def test_gsp4_2(self):
        g = gq.enumerate_gsp4(2)
        assert g.order == 720 == gq.gsp4_order(2)

    def test_gsp4_3(self):
        g = gq.enumerate_gsp4(3)
        assert g.order == 103680 == gq.gsp4_order(3)

    def test_materialize_refused_above_3(self):
        with pytest.raises(GroupTooLarge):
            gq.enumerate_gsp4(4)
        with pytest.raises(GroupTooLarge):
            gq.enumerate_gsp4(7, stream=True)

    def test_stream_q2_exact(self):
        """Bruhat streaming yields every element of GSp(4,2) exactly once."""
        seen = [g.key() for g in gq.enumerate_gsp4(2, stream=True)]
        assert len(seen) == 720
        closure = gq.enumerate_gsp4(2)
        assert set(seen) == set(g.key() for g in closure.elements)

    def test_stream_q3_count(self):
        assert sum(1 for _ in gq.enumerate_gsp4(3, stream=True)) == gq.gsp4_order(3)

    def test_stream_q4_prefix(self):
        """q=4 streaming: available, valid, and duplicate-free on a prefix."""
        seen = set()
        for g in itertools.islice(gq.enumerate_gsp4(4, stream=True), 2000):
            assert gq.similitude(g.mat) == g.mu
            seen.add(g.key())
        assert len(seen) == 2000


class TestConjugacyClasses:
    def test_gsp4_2_class_structure(self):
        """GSp(4,2) is S6: 11 classes with the familiar sizes."""
        classes = gq.conjugacy_classes(gq.enumerate_gsp4(2))
        assert len(classes) == 11
        assert sorted(c.size for c in classes) == [
            1, 15, 15, 40, 40, 45, 90, 90, 120, 120, 144,
        ]
        assert sum(c.size for c in classes) == 720

    def test_class_invariance(self):
        """Conjugating a class representative lands inside its class."""
        group = gq.enumerate_gsp4(2)
        classes = gq.conjugacy_classes(group)
        rng = random.Random(3)
        for cls in classes:
            for _ in range(5):
                h = rng.choice(group.elements)
                assert cls.rep.conjugate(h) in cls

    def test_bound(self):
        with pytest.raises(GroupTooLarge):
            gq.conjugacy_classes(gq.enumerate_gsp4(3))
