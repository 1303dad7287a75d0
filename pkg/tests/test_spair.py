from itertools import combinations, product

import pytest

from quivergb.minors import (
    MinorRef, PseudoMinorRef, enumerate_minors, expand_minor,
    minor_leading_term, natural_generators,
)
from quivergb.poly import (
    InputError, mono_divides, mono_from, mono_lcm, poly_add, render,
    s_polynomial,
)
from quivergb import spair
from quivergb.layout import build_layout, default_order, parse_quiver

from conftest import make_instance


# the worked 3x3 example: M = rows(2,3) cols(1,3), N = rows(1,3) cols(2,3)
M3 = MinorRef(2, (2, 3), (1, 3))
N3 = MinorRef(2, (1, 3), (2, 3))


class TestAnalysis:
    def test_worked_example(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        assert an.points == ((1, 2, 1), (2, 1, 1), (3, 3, 1))
        assert (sorted(an.S_M), sorted(an.S_N)) == ([2, 3], [1, 3])
        assert an.incidence_classes == ((3,),)

    def test_equal_minors_all_incidences(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, M3, ord)
        assert an.S_M == an.S_N == an.incidences

    def test_disjoint_supports(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, MinorRef(2, (1, 2), (1, 2)),
                           MinorRef(2, (1, 2), (2, 3)), ord)
        assert not an.incidences and an.l == 4

    def test_cross_pair_normalized_sink_first(self, double_2x2):
        layout, ord = double_2x2
        sink = MinorRef(2, (1, 2), (1, 2))
        source = MinorRef(1, (1, 3), (1, 2))
        an = spair.analyze(layout, source, sink, ord)
        assert an.M == sink and an.N == source and an.mode == "pages"


class TestPermutationSums:
    def test_L_of_identity(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        ident = {i: i for i in an.S_M}
        assert spair.L_of(an, ident, {i: i for i in an.S_N}) == an.L

    def test_L_of_worked_values(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        swap_m = {2: 3, 3: 2}
        swap_n = {1: 3, 3: 1}
        got = spair.L_of(an, swap_m, swap_n)
        want = mono_from((layout.var_of[p], 1)
                         for p in [(1, 3, 1), (3, 1, 1), (2, 2, 1)])
        assert got == want

    def test_L_of_rejects_foreign_indices(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        with pytest.raises(InputError):
            spair.L_of(an, {1: 2, 2: 1}, {i: i for i in an.S_N})

    def test_coset_reps_identity_first(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        rows = spair.coset_reps(an, "row")
        assert rows[0] == {2: 2, 3: 3}
        assert len(rows) == 2

    def test_coset_count(self, double_3x3):
        from math import factorial
        layout, ord = double_3x3
        gens = [r for r, _ in natural_generators(layout)]
        for A, B in list(combinations(gens, 2))[:40]:
            an = spair.analyze(layout, A, B, ord)
            reps = spair.coset_reps(an, "row")
            h = 1
            for cls in an.incidence_classes:
                h *= factorial(len(cls))
            assert len(reps) == factorial(len(an.S_M)) // h


class TestDecomposition:
    def test_worked_example_terms(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        sign, cof, pm = spair.p_row(an, {2: 3, 3: 2})
        assert sign == -1
        assert cof == mono_from([(layout.var_of[(3, 1, 1)], 1)])
        assert pm == PseudoMinorRef(2, (1, 2), (2, 3))
        sign, cof, pm = spair.p_col(an, {1: 3, 3: 1})
        assert sign == -1
        assert cof == mono_from([(layout.var_of[(1, 3, 1)], 1)])
        assert pm == PseudoMinorRef(2, (2, 3), (1, 2))

    def test_identity_gives_cofactor_times_minor(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        sign, cof, pm = spair.p_col(an, {i: i for i in an.S_N})
        assert sign == 1
        got = spair.expand_term(layout, spair.DecompTerm(sign, cof, pm))
        lt_m = minor_leading_term(layout, M3, ord)[1]
        from quivergb.poly import mono_div, poly_scale
        from fractions import Fraction
        want = poly_scale(expand_minor(layout, M3), (Fraction(1), mono_div(an.L, lt_m)))
        assert got == want

    def test_equals_s_polynomial_everywhere(self, double_3x3):
        layout, ord = double_3x3
        gens = natural_generators(layout)
        for (A, pa), (B, pb) in list(combinations(gens, 2))[:300]:
            d = spair.p_decomposition(layout, A, B, ord)
            assert spair.expand_decomposition(layout, d) == s_polynomial(pa, pb, ord)

    def test_small_lts_orientation(self, single_3x3):
        layout, ord = single_3x3
        an = spair.analyze(layout, M3, N3, ord)
        d = spair.p_decomposition(layout, M3, N3, ord)
        assert spair.has_small_lts(layout, d, an.L, ord)
        d_rev = spair.p_decomposition(layout, N3, M3, ord)
        assert not spair.has_small_lts(layout, d_rev, an.L, ord)

    def test_empty_for_equal_minors(self, single_3x3):
        layout, ord = single_3x3
        d = spair.p_decomposition(layout, M3, M3, ord)
        assert d.row_terms == () == d.col_terms

    def test_no_term_carries_L(self, double_2x2):
        layout, ord = double_2x2
        gens = [r for r, _ in natural_generators(layout)]
        for A, B in combinations(gens, 2):
            an = spair.analyze(layout, A, B, ord)
            d = spair.p_decomposition(layout, A, B, ord)
            for t in d.row_terms + d.col_terms:
                p = spair.expand_term(layout, t)
                assert an.L not in p.terms


class TestViolations:
    def test_worked_example_sides(self, single_3x3):
        layout, ord = single_3x3
        assert spair.find_violations(layout, M3, N3, ord) == []
        viols = spair.find_violations(layout, N3, M3, ord)
        assert len(viols) == 1
        v = viols[0]
        an = spair.analyze(layout, N3, M3, ord)
        pts = [an.points[i - 1] for i in (v.i, v.j, v.k)]
        assert pts == [(1, 2, 1), (2, 1, 1), (3, 3, 1)]
        assert v.strict

    def test_size_one_minors_have_none(self):
        layout, ord = make_instance("vertices 2\narrow 1 2\nm 3 3\nrank 0 0\n")
        a, b = MinorRef(2, (1,), (2,)), MinorRef(2, (2,), (1,))
        assert spair.find_violations(layout, a, b, ord) == []

    def test_equivalence_both_orders(self, single_3x3):
        layout, ord = single_3x3
        assert spair.check_noviolation_equivalence(layout, M3, N3, ord)
        assert spair.check_noviolation_equivalence(layout, N3, M3, ord)

    def test_budget_guard(self):
        layout, ord = make_instance("vertices 2\narrow 1 2\nm 9 9\nrank 8 8\n")
        rows = tuple(range(1, 10))
        a = MinorRef(2, rows, rows)
        with pytest.raises(InputError, match="budget"):
            spair.check_noviolation_equivalence(layout, a, a, ord)


DEF_M = MinorRef(2, (1, 4, 5), (2, 3, 5))
DEF_N = MinorRef(2, (2, 3, 5), (1, 4, 5))


@pytest.fixture(scope="module")
def single_5x5():
    return make_instance("vertices 2\narrow 1 2\nm 5 5\nrank 2 2\n")


class TestDefectsAndTransplant:
    def test_worked_defect(self, single_5x5):
        layout, ord = single_5x5
        defects = spair.find_defects(layout, DEF_M, DEF_N, ord)
        assert len(defects) == 1
        d = defects[0]
        assert (d.kind, d.maximal) == ("I", True)
        an = spair.analyze(layout, DEF_M, DEF_N, ord)
        coords = [(an.alpha[i], an.beta[i]) for i in (d.j, d.k, d.r, d.s, d.t)]
        assert coords == [(1, 2), (2, 1), (3, 4), (4, 3), (5, 5)]

    def test_cross_matrix_refused(self, double_2x2):
        layout, ord = double_2x2
        with pytest.raises(InputError):
            spair.find_defects(layout, MinorRef(2, (1, 2), (1, 2)),
                               MinorRef(1, (1, 3), (1, 2)), ord)

    def test_small_pairs_have_no_defects(self, single_3x3):
        layout, ord = single_3x3
        for A, B in combinations([r for r, _ in natural_generators(layout)], 2):
            assert spair.find_defects(layout, A, B, ord) == []

    def test_combination_lemma(self, single_5x5):
        layout, ord = single_5x5
        minors = enumerate_minors(layout, 2, 3)
        import random
        rng = random.Random(7)
        for _ in range(120):
            A, B = rng.sample(minors, 2)
            defective = any(spair.find_defects(layout, A, B, ord))
            both = (bool(spair.find_violations(layout, A, B, ord))
                    and bool(spair.find_violations(layout, B, A, ord)))
            assert defective == both

    def test_transplant_worked_example(self, single_5x5):
        layout, ord = single_5x5
        d = spair.find_defects(layout, DEF_M, DEF_N, ord)[0]
        P = spair.transplant(layout, DEF_M, DEF_N, d, ord)
        assert P == MinorRef(2, (2, 4, 5), (1, 3, 5))
        assert spair.distance(layout, DEF_M, P, ord) == 2
        assert spair.distance(layout, P, DEF_N, ord) == 2

    def test_transplant_type_two_by_symmetry(self, single_5x5):
        layout, ord = single_5x5
        d = spair.find_defects(layout, DEF_N, DEF_M, ord)[0]
        assert d.kind == "II"
        P = spair.transplant(layout, DEF_N, DEF_M, d, ord)
        assert P == MinorRef(2, (2, 4, 5), (1, 3, 5))

    def test_non_maximal_refused(self, single_5x5):
        layout, ord = single_5x5
        d = spair.find_defects(layout, DEF_M, DEF_N, ord)[0]
        fake = spair.Defect(d.kind, d.j, d.k, d.r, d.s, d.t, maximal=False)
        with pytest.raises(InputError, match="maximal"):
            spair.transplant(layout, DEF_M, DEF_N, fake, ord)


class TestDistance:
    def test_worked_example(self, single_3x3):
        layout, ord = single_3x3
        assert spair.distance(layout, M3, N3, ord) == 2

    def test_identity_and_disjoint(self, single_3x3):
        layout, ord = single_3x3
        assert spair.distance(layout, M3, M3, ord) == 0
        a = MinorRef(2, (1, 2), (1, 2))
        b = MinorRef(2, (1, 2), (2, 3))
        assert spair.distance(layout, a, b, ord) == 4


class TestCrossTransplant:
    def test_all_violating_cross_pairs(self, single_3x3):
        layout, ord = single_3x3
        sinks = enumerate_minors(layout, 2, 2)
        sources = enumerate_minors(layout, 1, 2)
        hit = 0
        for A, B in product(sinks, sources):
            v = spair.maximal_violation(layout, A, B, ord)
            if v is None:
                continue
            an = spair.analyze(layout, A, B, ord)
            try:
                P = spair.cross_transplant(layout, A, B, v, ord)
            except InputError as exc:
                assert "swap" in str(exc)
                continue
            hit += 1
            _, lm = minor_leading_term(layout, P, ord)
            assert mono_divides(lm, an.L)
            assert spair.distance(layout, P, an.N, ord) < \
                spair.distance(layout, an.M, an.N, ord)
        assert hit > 0

    def test_same_matrix_refused(self, single_3x3):
        layout, ord = single_3x3
        v = spair.find_violations(layout, N3, M3, ord)[0]
        with pytest.raises(InputError):
            spair.cross_transplant(layout, N3, M3, v, ord)


class TestChains:
    def test_trivial_chain(self, single_3x3):
        layout, ord = single_3x3
        cert = spair.build_chain(layout, M3, M3, ord)
        assert cert.refs == [M3] and cert.steps == []
        assert spair.verify_chain(layout, cert, ord)

    def test_worked_example_direct(self, single_3x3):
        layout, ord = single_3x3
        cert = spair.build_chain(layout, M3, N3, ord)
        assert cert.refs == [M3, N3]
        assert spair.verify_chain(layout, cert, ord)

    def test_transplant_inserted(self):
        layout, ord = make_instance("vertices 2\narrow 1 2\nm 5 5\nrank 2 2\n")
        cert = spair.build_chain(layout, DEF_M, DEF_N, ord)
        assert cert.refs == [DEF_M, MinorRef(2, (2, 4, 5), (1, 3, 5)), DEF_N]
        assert spair.verify_chain(layout, cert, ord)

    def test_zero_distance_cross_pair(self, double_2x2):
        layout, ord = double_2x2
        A = MinorRef(2, (1, 2), (1, 4))
        B = MinorRef(1, (1, 4), (1, 2))
        assert minor_leading_term(layout, A, ord) == minor_leading_term(layout, B, ord)
        cert = spair.build_chain(layout, A, B, ord)
        assert cert.refs == [A, B]
        assert spair.verify_chain(layout, cert, ord)

    def test_all_pairs_small_instances(self, double_2x2):
        layout, ord = double_2x2
        gens = [r for r, _ in natural_generators(layout)]
        for A, B in combinations(gens, 2):
            cert = spair.build_chain(layout, A, B, ord)
            assert spair.verify_chain(layout, cert, ord)

    def test_forged_certificate_rejected(self, single_3x3):
        layout, ord = single_3x3
        cert = spair.build_chain(layout, M3, N3, ord)
        d = cert.steps[0]
        big = mono_from([(layout.var_of[(1, 1, 1)], 2)])
        forged = spair.Decomposition(
            d.M, d.N,
            tuple(spair.DecompTerm(t.sign, big, t.pm) for t in d.row_terms),
            d.col_terms)
        bad = spair.ChainCertificate(cert.refs, [forged])
        assert not spair.verify_chain(layout, bad, ord)

    def test_foreign_intermediate_rejected(self, single_3x3):
        layout, ord = single_3x3
        cert = spair.build_chain(layout, M3, N3, ord)
        stray = MinorRef(2, (1, 2), (1, 2))
        bad = spair.ChainCertificate([M3, stray, N3], cert.steps + cert.steps)
        assert not spair.verify_chain(layout, bad, ord)

    def test_render_certificate(self, single_3x3):
        layout, ord = single_3x3
        cert = spair.build_chain(layout, M3, N3, ord)
        text = spair.render_certificate(layout, cert, ord)
        assert text.startswith("chain 2:2,3;1,3 2:1,3;2,3")
        assert "step 0:" in text
