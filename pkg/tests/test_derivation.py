import numpy as np
import pytest

from bccqca.automaton import check_c0, check_isotropy, check_unitarity_groups, momentum_operator
from bccqca.derivation import (
    PROBE_KS,
    adjoint_reflected_fingerprint,
    all_weyl_solutions,
    b_matrix,
    build_b_matrices,
    build_weyl_solution,
    classify_equivalence,
    enumerate_gr_solutions,
    gram_from_xy,
    gram_pair,
    rotation4,
    spectral_fingerprint,
    tetrahedron_matrix,
    weyl_solution,
)
from bccqca.errors import DegenerateProbe
from bccqca.smallmat import eigenphases2, max_abs

G_TETRA = np.array([[3, -1, -1, -1], [-1, 3, -1, -1], [-1, -1, 3, -1], [-1, -1, -1, 3]])


class TestGramPair:
    def test_tetrahedron_columns(self):
        gr, gc = gram_pair(tetrahedron_matrix().T)
        assert np.array_equal(gr.real, G_TETRA) and max_abs(gr.imag) == 0
        assert np.array_equal(gc.real, G_TETRA) and max_abs(gc.imag) == 0

    def test_b1_minus_columns_conjugated_gram(self):
        _, gc = gram_pair(b_matrix(1, -1).entries.T)
        assert max_abs(gc - G_TETRA) <= 1e-14

    def test_zero_vectors(self):
        gr, gc = gram_pair(np.zeros((4, 3)))
        assert max_abs(gr) == 0 and max_abs(gc) == 0

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            gram_pair(np.zeros((3, 4)))


class TestRotation:
    def test_orthogonal_exactly(self):
        r = rotation4()
        assert np.array_equal(r @ r.T, np.eye(4))

    def test_diagonalises_search_grams(self):
        r = rotation4()
        for x, y, g in enumerate_gr_solutions():
            d = r @ g @ r.T
            expect = np.diag([0.0, 2.0 * (1 + x), -2.0 * (x + y), 2.0 * (1 + y)])
            assert max_abs(d - expect) <= 1e-12


class TestEnumerateGr:
    def test_exact_pairs_in_order(self):
        pairs = [(x, y) for x, y, _ in enumerate_gr_solutions()]
        assert pairs == [(1, -3), (1, 1), (-3, 1)]

    def test_rejected_candidate(self):
        # (-3, -3) fails the |x + y| = 2 filter
        assert abs(-3 + -3) != 2
        assert (-3, -3) not in [(x, y) for x, y, _ in enumerate_gr_solutions()]

    def test_eigenvalues_of_first_solution(self):
        # oracle: closed-form eigenvalue set {0, 2(1+x), -2(x+y), 2(1+y)}
        _, _, g = enumerate_gr_solutions()[0]
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvalsh(g)), sorted([0.0, 4.0, 4.0, -4.0]), atol=1e-12
        )

    def test_row_sums_vanish(self):
        for _, _, g in enumerate_gr_solutions():
            assert max_abs(g.sum(axis=1)) == 0

    def test_template_matches_spelled_out_matrix(self):
        expect = np.array([[1, 1, 1, -3], [1, 1, -3, 1], [1, -3, 1, 1], [-3, 1, 1, 1]])
        assert np.array_equal(gram_from_xy(1, -3), expect)


class TestBMatrices:
    def test_six_matrices(self):
        assert len(build_b_matrices()) == 6

    def test_b1_plus_first_column(self):
        b = b_matrix(1, 1)
        np.testing.assert_array_equal(b.entries[:, 0], [1, 1, 1j])

    def test_conjugate_pairing(self):
        for family in (1, 2, 3):
            assert max_abs(b_matrix(family, 1).entries - b_matrix(family, -1).entries.conj()) == 0

    def test_columns_have_unit_self_product(self):
        for b in build_b_matrices():
            for col in b.entries.T:
                assert abs(np.dot(col, col) - 1.0) <= 1e-14

    def test_conjugated_gram_is_tetrahedron_gram(self):
        for b in build_b_matrices():
            assert max_abs(b.entries.conj().T @ b.entries - G_TETRA) <= 1e-14

    def test_plain_gram_matches_family_solution(self):
        sols = {(x, y): g for x, y, g in enumerate_gr_solutions()}
        family_to_pair = {1: (1, -3), 2: (1, 1), 3: (-3, 1)}
        for b in build_b_matrices():
            gr = b.entries.T @ b.entries
            assert max_abs(gr.imag) <= 1e-14
            assert max_abs(gr.real - sols[family_to_pair[b.family]]) <= 1e-14

    def test_conjugated_gram_determinant_vanishes(self):
        for b in build_b_matrices():
            gc = b.entries.conj().T @ b.entries
            assert abs(np.linalg.det(gc)) <= 1e-12
            np.testing.assert_allclose(np.diag(gc).real, 3.0, atol=1e-14)

    def test_conjugated_gram_row_sums_vanish(self):
        for b in build_b_matrices():
            gc = b.entries.conj().T @ b.entries
            assert max_abs(gc.sum(axis=1)) <= 1e-14


class TestWeylSolution:
    def test_weights(self):
        sol = weyl_solution()
        assert sol.alpha + sol.beta == 0.5
        assert (sol.alpha * sol.alpha.conjugate()).real == 0.125
        assert sol.alpha == (1 + 1j) / 4

    def test_centre_matrix_vanishes(self):
        assert max_abs(build_weyl_solution().a0) == 0

    def test_all_constraints_pass(self):
        ts = build_weyl_solution()
        assert check_c0(ts) <= 1e-14
        assert check_unitarity_groups(ts).passed
        assert check_isotropy(ts) <= 1e-14

    def test_alpha_branch_flag(self):
        assert weyl_solution(alpha_branch=1).alpha_branch == 1
        assert weyl_solution(alpha_branch=-1).alpha_branch == -1


class TestClassification:
    def test_twelve_automata(self):
        assert len(all_weyl_solutions()) == 12

    def test_two_classes_of_six(self):
        sols = all_weyl_solutions()
        classes = classify_equivalence(sols)
        assert sorted(len(c) for c in classes) == [6, 6]

    def test_probe_separation_values(self):
        # closed form at k = (pi/4,)*3: cos w = cos^3 + sin^3 for one branch, 0 for the other
        plus = build_weyl_solution(alpha_branch=1)
        minus = build_weyl_solution(alpha_branch=-1)
        k = PROBE_KS[0]
        wp = eigenphases2(momentum_operator(plus, k))[0]
        wm = eigenphases2(momentum_operator(minus, k))[0]
        assert np.cos(wp) == pytest.approx(np.cos(np.pi / 4) ** 3 + np.sin(np.pi / 4) ** 3, abs=1e-12)
        assert np.cos(wp) == pytest.approx(0.7071068, abs=1e-6)
        assert np.cos(wm) == pytest.approx(0.0, abs=1e-12)

    def test_classes_follow_alpha_branch(self):
        sols = all_weyl_solutions()
        classes = classify_equivalence(sols)
        for members in classes:
            branches = {np.sign(np.trace(sols[i].a_plus[0]).imag) for i in members}
            assert len(branches) == 1

    def test_adjoint_reflection_exchanges_classes(self):
        sols = all_weyl_solutions()
        classes = classify_equivalence(sols)
        rep0 = spectral_fingerprint(sols[classes[0][0]])
        rep1 = spectral_fingerprint(sols[classes[1][0]])
        swapped = adjoint_reflected_fingerprint(sols[classes[0][0]])
        assert max_abs(swapped - rep1) <= 1e-9
        assert max_abs(swapped - rep0) > 0.1

    def test_degenerate_probe_raises(self):
        with pytest.raises(DegenerateProbe):
            classify_equivalence(all_weyl_solutions(), probes=np.zeros((1, 3)))
