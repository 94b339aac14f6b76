import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_aniso_norm, brute_iso_norm
from parawell import (NormRangeError, RegularityIndex, SlowlyVaryingFn,
                      SpectralField, aniso_norm, aniso_weight,
                      embedding_constants, iso_norm, l2_norm, load_field,
                      parseval_roundtrip_error, random_field, save_field)

CONST = SlowlyVaryingFn.constant()
LN = SlowlyVaryingFn.log_multiscale(1.0)
BOX = (2 * np.pi, 2 * np.pi, 2 * np.pi)  # unit cell measure


class TestAnisoWeight:
    def test_origin(self):
        assert aniso_weight([0.0], 0.0, RegularityIndex(5.0, CONST)) == 1.0

    def test_forced_arithmetic(self):
        assert aniso_weight([1.0, 1.0], 1.0, RegularityIndex(2.0, CONST)) == 4.0

    def test_with_log_weight(self):
        # r = sqrt(1 + 9 + 6) = 4, which sits above a splice radius of e
        phi = SlowlyVaryingFn.log_multiscale(1.0, splice_radius=math.e)
        w = aniso_weight([3.0, 0.0], 6.0, RegularityIndex(1.0, phi))
        assert w == pytest.approx(4.0 * math.log(4.0), rel=1e-14)

    def test_eta_enters_linearly(self):
        up = aniso_weight([0.0], 4.0, RegularityIndex(2.0, CONST))
        assert up == pytest.approx((1 + 4) ** 1, rel=1e-14)


class TestAnisoNorm:
    def test_single_mode(self):
        f = SpectralField.single_mode((8, 8, 8), BOX, (1, 1, 1))
        assert aniso_norm(f, RegularityIndex(2.0, CONST)) == pytest.approx(4.0)

    def test_s0_is_l2(self):
        rng = np.random.default_rng(0)
        f = random_field((8, 8, 8), (2 * np.pi, 3.0, 1.25), rng)
        assert aniso_norm(f, RegularityIndex(0.0, CONST)) == pytest.approx(
            l2_norm(f), rel=1e-13)

    @pytest.mark.parametrize("phi", [CONST, LN])
    def test_against_bruteforce(self, phi):
        rng = np.random.default_rng(7)
        f = random_field((8, 8, 8), (2.0, 6.0, 1.5), rng)
        got = aniso_norm(f, RegularityIndex(2.3, phi))
        want = brute_aniso_norm(f, 2.3, phi)
        assert got == pytest.approx(want, rel=1e-12)

    def test_zero_iff_zero(self):
        z = SpectralField.zeros((4, 4), (1.0, 1.0))
        assert aniso_norm(z, RegularityIndex(3.0, CONST)) == 0.0

    def test_requires_time_axis(self):
        f = SpectralField.zeros((4, 4), (1.0, 1.0), time_axis=False)
        with pytest.raises(ValueError):
            aniso_norm(f, RegularityIndex(1.0, CONST))

    def test_overflow_reports_mode(self):
        f = SpectralField.single_mode((16, 16, 16), (0.01, 0.01, 0.01),
                                      (7, 7, 7))
        with pytest.raises(NormRangeError) as err:
            aniso_norm(f, RegularityIndex(200.0, CONST))
        assert err.value.mode is not None

    def test_monotone_in_s(self):
        rng = np.random.default_rng(5)
        f = random_field((8, 8, 8), BOX, rng)
        norms = [aniso_norm(f, RegularityIndex(s, CONST))
                 for s in (0.0, 0.5, 1.0, 2.0, 3.5)]
        assert all(a <= b * (1 + 1e-15) for a, b in zip(norms, norms[1:]))

    @given(c=st.one_of(st.just(0.0), st.floats(1e-3, 10.0),
                       st.floats(-10.0, -1e-3)))
    def test_homogeneity(self, c):
        rng = np.random.default_rng(11)
        f = random_field((4, 4, 4), BOX, rng)
        base = aniso_norm(f, RegularityIndex(1.5, CONST))
        assert aniso_norm(f.scaled(c), RegularityIndex(1.5, CONST)) == \
            pytest.approx(abs(c) * base, rel=1e-12, abs=0.0)


class TestIsoNorm:
    def test_zero_mode_gives_phi_of_one(self):
        f = SpectralField.single_mode((8, 8), (2 * np.pi, 2 * np.pi), (0, 0),
                                      time_axis=False)
        assert iso_norm(f, RegularityIndex(3.0, LN)) == pytest.approx(LN(1.0))

    def test_forced_mode(self):
        # |xi|^2 = 3 -> <xi> = 2, s = 1 -> norm 2
        f = SpectralField.single_mode((8, 8, 8), BOX, (1, 1, 1),
                                      time_axis=False)
        assert iso_norm(f, RegularityIndex(1.0, CONST)) == pytest.approx(2.0)

    def test_against_bruteforce(self):
        rng = np.random.default_rng(9)
        f = random_field((8, 8), (2.0, 5.0), rng, time_axis=False)
        got = iso_norm(f, RegularityIndex(1.7, LN))
        assert got == pytest.approx(brute_iso_norm(f, 1.7, LN), rel=1e-12)

    def test_rejects_time_axis(self):
        f = SpectralField.zeros((4, 4), (1.0, 1.0))
        with pytest.raises(ValueError):
            iso_norm(f, RegularityIndex(1.0, CONST))


class TestParseval:
    @pytest.mark.parametrize("seed", range(4))
    def test_roundtrip(self, seed):
        rng = np.random.default_rng(seed)
        f = random_field((8, 16, 4), (1.0, 2.0, 0.5), rng)
        assert parseval_roundtrip_error(f) <= 1e-10

    def test_values_inverse(self):
        rng = np.random.default_rng(1)
        f = random_field((8, 8), (1.0, 1.0), rng)
        back = SpectralField.from_values(f.values(), f.periods)
        assert np.allclose(back.coeffs, f.coeffs, atol=1e-12)


class TestFieldValidation:
    def test_odd_grid_rejected(self):
        with pytest.raises(ValueError):
            SpectralField.zeros((5, 4), (1.0, 1.0))

    def test_period_mismatch(self):
        with pytest.raises(ValueError):
            SpectralField.zeros((4, 4), (1.0,))


class TestEmbeddingConstants:
    def test_trivial_sobolev(self):
        out = embedding_constants(1.0, RegularityIndex(2.0, CONST), 3.0, 1e4)
        assert out.c_low == pytest.approx(1.0)
        assert out.c_high == pytest.approx(1.0)

    def test_log_weight_peak_near_splice(self):
        out = embedding_constants(1.0, RegularityIndex(2.0, LN), 3.0, 1e4,
                                  grid_points=1 << 14)
        # dense log-grid maximization oracle
        grid = np.geomspace(1.0, 1e4, 1 << 16)
        want = float(np.max(grid ** (-1.0) * LN(grid)))
        assert out.c_high == pytest.approx(want, rel=1e-6)
        assert out.r_at_high < 50.0

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            embedding_constants(3.0, RegularityIndex(2.0, CONST), 4.0, 10.0)

    def test_chained_inequalities_on_band_limited_fields(self):
        rng = np.random.default_rng(21)
        idx = RegularityIndex(2.0, LN)
        for _ in range(5):
            f = random_field((8, 8, 8), BOX, rng)
            r_max = 1.0 + math.sqrt(
                2 * (2 * np.pi * 4 / BOX[0]) ** 2 + 2 * np.pi * 4 / BOX[2])
            c = embedding_constants(1.0, idx, 3.0, r_max)
            n_low = aniso_norm(f, RegularityIndex(1.0, CONST))
            n_mid = aniso_norm(f, idx)
            n_high = aniso_norm(f, RegularityIndex(3.0, CONST))
            assert n_low <= c.c_low * n_mid * (1 + 1e-12)
            assert n_mid <= c.c_high * n_high * (1 + 1e-12)


class TestSerialization:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(3)
        f = random_field((4, 6), (1.0, 2.5), rng, time_axis=True)
        path = tmp_path / "field.txt"
        save_field(f, path)
        g = load_field(path)
        assert g.periods == f.periods and g.time_axis == f.time_axis
        assert np.array_equal(g.coeffs, f.coeffs)

    def test_rejects_other_files(self, tmp_path):
        path = tmp_path / "junk.txt"
        path.write_text("not a field\n")
        with pytest.raises(ValueError):
            load_field(path)
