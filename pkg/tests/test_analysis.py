import numpy as np
import pytest

from bccqca.analysis import (
    continuum_residual,
    cube_grid,
    dirac_band,
    dirac_continuum_residual,
    group_velocity,
    hamiltonian_limit,
    matched_abs_err,
    spectrum_samples,
    spectrum_to_csv,
    verify_dispersion,
    weyl_band,
    weyl_dispersion,
)
from bccqca.automaton import momentum_operator
from bccqca.derivation import build_weyl_solution, weyl_solution
from bccqca.dirac import build_dirac
from bccqca.errors import DegenerateBand, LogBranch
from bccqca.smallmat import SIGMA, max_abs, vec_sigma


@pytest.fixture(scope="module")
def canonical():
    return build_weyl_solution()


class TestWeylDispersion:
    def test_zero(self):
        assert weyl_dispersion([0, 0, 0], 1) == (0.0, 0.0)

    def test_half_pi_corner(self):
        wp, _ = weyl_dispersion([np.pi / 2] * 3, 1)
        assert wp == 0.0
        wp, wm = weyl_dispersion([np.pi / 2] * 3, -1)
        assert wp == pytest.approx(np.pi, abs=1e-15)

    def test_axis_is_linear(self):
        for kappa in (0.2, 0.9, 2.0):
            wp, wm = weyl_dispersion([kappa, 0, 0], 1)
            assert wp == pytest.approx(kappa, abs=1e-12)
            assert wm == pytest.approx(-kappa, abs=1e-12)

    def test_branch_exchange_under_reflection(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            k = rng.uniform(-np.pi, np.pi, 3)
            assert weyl_dispersion(k, 1)[0] == weyl_dispersion(-k, -1)[0]


class TestMatching:
    def test_wraps_at_pi_seam(self):
        assert matched_abs_err([np.pi, np.pi], [np.pi, -np.pi]) <= 1e-15

    def test_orders_optimally(self):
        assert matched_abs_err([0.5, -0.5], [-0.5, 0.5]) == 0.0

    def test_reports_genuine_gap(self):
        assert matched_abs_err([0.6, -0.6], [0.5, -0.5]) == pytest.approx(0.1, abs=1e-12)


class TestVerifyDispersion:
    def test_weyl_grid(self, canonical):
        assert verify_dispersion(canonical, cube_grid(17)) <= 1e-10

    def test_dirac_grid(self):
        assert verify_dispersion(build_dirac(0.5), cube_grid(9)) <= 1e-10

    def test_wrong_branch_is_loud(self, canonical):
        assert verify_dispersion(canonical, cube_grid(5), branch=-1) >= 0.1

    def test_dirac_s_one_union_of_weyl_spectra(self, canonical):
        # block structure: the 4x4 spectrum is the union of A(k)'s phases
        # and their negatives
        dts = build_dirac(1.0)
        rng = np.random.default_rng(2)
        from bccqca.smallmat import eigenphases2, eigenphases4
        from bccqca.dirac import dirac_momentum_operator

        for _ in range(20):
            k = rng.uniform(-np.pi, np.pi, 3)
            w2 = eigenphases2(momentum_operator(canonical, k))
            expected = np.array([w2[0], w2[1], -w2[0], -w2[1]])
            got = eigenphases4(dirac_momentum_operator(dts, k))
            assert matched_abs_err(got, expected) <= 1e-12

    def test_sample_csv_roundtrip(self, canonical, tmp_path):
        samples = spectrum_samples(canonical, cube_grid(3))
        path = tmp_path / "spec.csv"
        spectrum_to_csv(path, samples)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "kx,ky,kz,w_num_1,w_num_2,w_cf_plus,w_cf_minus,abs_err"
        assert len(lines) == 1 + 27

    def test_dirac_csv_has_four_numeric_columns(self, tmp_path):
        samples = spectrum_samples(build_dirac(0.5), cube_grid(2))
        path = tmp_path / "spec4.csv"
        spectrum_to_csv(path, samples)
        header = path.read_text().splitlines()[0]
        assert "w_num_4" in header


class TestGroupVelocity:
    def test_weyl_axis_exact(self):
        v = group_velocity(weyl_band(1), [0.3, 0, 0], h=1e-4)
        np.testing.assert_allclose(v, [1, 0, 0], atol=1e-6)

    def test_small_k_speed_approaches_one(self):
        # the speed deficit shrinks linearly with |k| along the diagonal
        direction = np.array([1.0, 1.0, 1.0]) / np.sqrt(3)
        speeds = [
            np.linalg.norm(group_velocity(weyl_band(1), r * direction))
            for r in (0.04, 0.02, 0.01)
        ]
        assert speeds[-1] == pytest.approx(1.0, abs=5e-3)
        deficits = [1.0 - s for s in speeds]
        assert deficits[0] > deficits[1] > deficits[2] > 0

    def test_dirac_at_rest_is_static(self):
        v = group_velocity(dirac_band(0.5, 1), [0, 0, 0])
        np.testing.assert_allclose(v, [0, 0, 0], atol=1e-9)

    def test_dirac_subluminal(self):
        v = group_velocity(dirac_band(0.8, 1), [0.2, 0, 0])
        assert 0 < np.linalg.norm(v) < 1

    def test_degenerate_crossing_raises(self):
        with pytest.raises(DegenerateBand):
            group_velocity(weyl_band(1), [0, 0, 0])

    def test_step_bounds(self):
        with pytest.raises(ValueError):
            group_velocity(weyl_band(1), [0.3, 0, 0], h=0.5)


class TestContinuumLimit:
    def test_zero_scale_residual_vanishes(self, canonical):
        from bccqca.smallmat import ID2

        assert max_abs(momentum_operator(canonical, [0, 0, 0]) - ID2) <= 1e-14

    def test_weyl_second_order(self, canonical):
        fit = continuum_residual(canonical, [0.2, 0.1, 0.05, 0.025], [1, 1, 1])
        assert 1.9 <= fit.fitted_order <= 2.1

    def test_residual_ratio_approaches_four(self, canonical):
        fit = continuum_residual(canonical, [0.05, 0.025], [0.2, -0.7, 1.0])
        ratio = fit.residuals[0] / fit.residuals[1]
        assert 3.5 <= ratio <= 4.5

    def test_axis_direction_target_structure(self, canonical):
        # along an axis A reduces to cos(eps) I + i sin(eps) sigma exactly
        eps = 0.1
        op = momentum_operator(canonical, [eps, 0, 0])
        expect = np.cos(eps) * np.eye(2) + 1j * np.sin(eps) * SIGMA[0]
        assert max_abs(op - expect) <= 1e-14

    def test_dirac_joint_scaling_second_order(self):
        fit = dirac_continuum_residual(weyl_solution(), [0.2, 0.1, 0.05, 0.025], [0.4, 1, -0.3])
        assert 1.9 <= fit.fitted_order <= 2.1
        # the mass never exceeds 0.1 along the scan with the default ratio
        assert 0.5 * 0.2 <= 0.1

    def test_dirac_near_unit_coupling(self):
        # tiny mass: residual still second order jointly in (wave vector, mass)
        fit = dirac_continuum_residual(
            weyl_solution(), [0.2, 0.1, 0.05, 0.025], [1, 1, 1], r_ratio=0.0707
        )
        assert 1.9 <= fit.fitted_order <= 2.1

    def test_scales_must_decrease(self, canonical):
        with pytest.raises(ValueError):
            continuum_residual(canonical, [0.1, 0.2], [1, 0, 0])

    def test_scale_cap(self, canonical):
        with pytest.raises(ValueError):
            continuum_residual(canonical, [0.6, 0.3], [1, 0, 0])


class TestHamiltonianLimit:
    def test_zero_at_origin(self, canonical):
        h = hamiltonian_limit(canonical)
        assert max_abs(h([0, 0, 0])) <= 1e-14

    def test_small_k_linear_term(self, canonical):
        h = hamiltonian_limit(canonical)
        assert max_abs(h([0.1, 0, 0]) + 0.1 * SIGMA[0]) <= 1e-2

    def test_quadratic_remainder_bound(self, canonical):
        h = hamiltonian_limit(canonical)
        rng = np.random.default_rng(3)
        for _ in range(50):
            k = rng.uniform(-0.2, 0.2, 3)
            resid = max_abs(h(k) + vec_sigma(k))
            assert resid <= 1.0 * max(k @ k, 1e-30)

    def test_eigenvalues_match_negated_phases(self, canonical):
        from bccqca.smallmat import eigenphases2

        h = hamiltonian_limit(canonical)
        k = [0.4, -0.2, 0.15]
        wp, wm = eigenphases2(momentum_operator(canonical, k))
        ev = np.sort(np.linalg.eigvalsh(h(k)))
        np.testing.assert_allclose(ev, sorted([-wp, -wm]), atol=1e-12)

    def test_branch_cut_guard(self, canonical):
        h = hamiltonian_limit(canonical)
        with pytest.raises(LogBranch):
            h([np.pi, np.pi, np.pi])


class TestTraceIdentity:
    def test_cosine_from_trace(self, canonical):
        rng = np.random.default_rng(4)
        for _ in range(100):
            k = rng.uniform(-np.pi, np.pi, 3)
            op = momentum_operator(canonical, k)
            assert abs(np.cos(weyl_dispersion(k, 1)[0]) - np.trace(op).real / 2) <= 1e-12
