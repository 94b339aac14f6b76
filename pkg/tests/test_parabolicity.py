import math

import numpy as np
import pytest

from conftest import heat_spec, matrix_laplacian_spec, upper_root_count
from parawell import (InvariantViolationError, RootSplitError, StructuralError,
                      check_condition_i, check_condition_ii,
                      check_parabolicity, condition_i_samples,
                      condition_ii_samples, covering_rows, remainder_matrix,
                      split_roots_zeta)
from parawell.polynomials import u_divmod, u_mul, u_pad_left, u_poly, u_trim


class TestSplitRoots:
    def test_double_quadratic(self):
        p, q = 2.0, 9.0
        coeffs = u_mul([1.0, 0.0, p + q], [1.0, 0.0, p + q])
        split = split_roots_zeta(coeffs)
        w = 1j * math.sqrt(p + q)
        assert split.m == 2
        assert np.allclose(sorted(z.imag for z in split.zeta_plus),
                           [w.imag, w.imag], atol=1e-6)
        assert np.allclose([z.imag for z in split.zeta_minus],
                           [-w.imag, -w.imag], atol=1e-6)

    def test_real_roots_rejected(self):
        with pytest.raises(RootSplitError):
            split_roots_zeta([1.0, 0.0, -1.0])  # zeta^2 - 1

    def test_unbalanced_rejected(self):
        # (zeta - i)(zeta - 2i)(zeta + 3i): 2 up, 1 down
        coeffs = u_mul(u_mul([1.0, -1j], [1.0, -2j]), [1.0, 3j])
        with pytest.raises(InvariantViolationError):
            split_roots_zeta(coeffs)

    @pytest.mark.parametrize("seed", range(5))
    def test_against_contour_oracle(self, seed):
        # random stable samples from the heat fixture
        spec = heat_spec()
        rng = np.random.default_rng(seed)
        smp = condition_ii_samples(spec, 0.5, count=1, seed=seed)[0]
        _rows, det = covering_rows(spec, smp.x, smp.t, smp.xi, smp.nu, smp.p)
        split = split_roots_zeta(det)
        assert split.m == upper_root_count(det)

    def test_degree_precondition(self):
        with pytest.raises(ValueError):
            split_roots_zeta([1.0, 2.0])


class TestConditionI:
    def test_decoupled_heat(self, dirichlet_heat):
        rep = check_condition_i(
            dirichlet_heat,
            condition_i_samples(dirichlet_heat, directions=25, space_time=8,
                                seed=0))
        assert rep.passed
        assert rep.delta_estimate == pytest.approx(1.0, abs=1e-12)
        assert rep.sample_count == 200

    def test_backward_heat_fails(self):
        spec = heat_spec(sign=-1.0)
        rep = check_condition_i(
            spec, condition_i_samples(spec, directions=16, space_time=4,
                                      seed=0))
        assert not rep.passed
        assert rep.delta_estimate == pytest.approx(-1.0, abs=1e-12)
        assert rep.worst_sample is not None

    def test_matrix_symbol_matches_eigen_oracle(self):
        M = np.array([[2.0, 1.0], [0.5, 3.0]])
        spec = matrix_laplacian_spec(M)
        rep = check_condition_i(
            spec, condition_i_samples(spec, directions=20, space_time=5,
                                      seed=1))
        want = float(np.min(np.linalg.eigvals(M).real))
        assert rep.delta_estimate == pytest.approx(want, rel=1e-10)

    def test_empty_grid_rejected(self, dirichlet_heat):
        with pytest.raises(ValueError):
            check_condition_i(dirichlet_heat, [])


class TestConditionII:
    def test_dirichlet_heat_passes(self, dirichlet_heat):
        samples = condition_ii_samples(dirichlet_heat, 0.5, count=200, seed=3)
        rep = check_condition_ii(dirichlet_heat, 0.5, samples)
        assert rep.passed
        assert rep.m == 2
        assert rep.min_singular_value > 0.1

    def test_hand_division_oracle(self, dirichlet_heat):
        # decoupled heat with Dirichlet rows: each diagonal remainder is the
        # reduction of (p + q + zeta^2) modulo (zeta - w)^2, w = i*sqrt(p+q),
        # which works out to 2*w*zeta + 2*(p + q)
        xi = (0.0, 0.6)
        nu = (1.0, 0.0)
        p = 0.3 + 0.2j
        q = 0.36
        w = 1j * np.sqrt(p + q)
        rows, _det = covering_rows(dirichlet_heat, (0.0, 1.0), 0.5, xi, nu, p)
        modulus = u_mul([1.0, -w], [1.0, -w])
        mat = remainder_matrix(rows, modulus)
        assert mat.shape == (2, 4)
        want_row0 = np.array([2 * (p + q), 2 * w, 0.0, 0.0])
        # stacking order: coefficients are descending, padded to length m
        assert np.allclose(mat[0], [2 * w, 2 * (p + q), 0.0, 0.0], atol=1e-10)
        assert np.allclose(mat[1], [0.0, 0.0, 2 * w, 2 * (p + q)], atol=1e-10)
        assert np.linalg.matrix_rank(mat) == 2
        assert want_row0 is not None

    def test_zero_row_fails(self):
        spec = heat_spec(boundary="zero-row")
        samples = condition_ii_samples(spec, 0.5, count=50, seed=0)
        rep = check_condition_ii(spec, 0.5, samples)
        assert not rep.passed
        assert rep.min_singular_value < 1e-12

    def test_neumann_passes(self):
        spec = heat_spec(boundary="neumann")
        samples = condition_ii_samples(spec, 0.5, count=100, seed=0)
        rep = check_condition_ii(spec, 0.5, samples)
        assert rep.passed
        assert rep.min_singular_value > 0.1

    def test_modulus_scaling_invariance(self, dirichlet_heat):
        smp = condition_ii_samples(dirichlet_heat, 0.5, count=1, seed=9)[0]
        rows, det = covering_rows(dirichlet_heat, smp.x, smp.t, smp.xi,
                                  smp.nu, smp.p)
        split = split_roots_zeta(det)
        modulus = u_poly(np.poly(np.array(split.zeta_plus)))
        sv1 = np.linalg.svd(remainder_matrix(rows, modulus),
                            compute_uv=False)[-1]
        sv2 = np.linalg.svd(remainder_matrix(rows, 7.3 * modulus),
                            compute_uv=False)[-1]
        assert sv1 == pytest.approx(sv2, abs=1e-8)

    def test_division_identity(self, dirichlet_heat):
        smp = condition_ii_samples(dirichlet_heat, 0.5, count=1, seed=4)[0]
        rows, det = covering_rows(dirichlet_heat, smp.x, smp.t, smp.xi,
                                  smp.nu, smp.p)
        split = split_roots_zeta(det)
        modulus = u_poly(np.poly(np.array(split.zeta_plus)))
        for j in range(2):
            for k in range(2):
                entry = u_trim(rows.entries[j][k], 0.0)
                quot, rem = u_divmod(entry, modulus)
                rebuilt = u_mul(quot, modulus)
                m = max(len(rebuilt), len(entry), len(rem))
                rebuilt = u_pad_left(rebuilt, m) + u_pad_left(rem, m)
                assert np.allclose(rebuilt, u_pad_left(entry, m), atol=1e-10)

    def test_boundary_samples_respect_slice(self, dirichlet_heat):
        for smp in condition_ii_samples(dirichlet_heat, 0.5, count=100,
                                        seed=5):
            total = sum(v * v for v in smp.xi) + abs(smp.p)
            assert total == pytest.approx(1.0, abs=1e-12)
            assert smp.p.real >= -0.5 * sum(v * v for v in smp.xi) - 1e-12
            assert smp.xi[0] == 0.0  # tangency on the flat faces

    def test_periodic_domain_has_no_boundary(self):
        spec = heat_spec(kind="periodic")
        with pytest.raises(StructuralError):
            condition_ii_samples(spec, 0.5, count=10, seed=0)


class TestCombined:
    def test_full_report(self, dirichlet_heat):
        rep = check_parabolicity(dirichlet_heat, directions=16, space_time=4,
                                 boundary_samples=64, seed=0)
        assert rep.passed
        assert rep.delta1 == pytest.approx(rep.condition_i.delta_estimate / 2)
        d = rep.to_dict()
        assert d["passed"] and d["condition_ii"]["m"] == 2

    def test_backward_skips_condition_ii(self):
        spec = heat_spec(sign=-1.0)
        rep = check_parabolicity(spec, directions=8, space_time=2,
                                 boundary_samples=16, seed=0)
        assert not rep.passed
        assert rep.condition_ii is None
