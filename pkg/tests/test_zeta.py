import math

import mpmath as mp
import numpy as np
import pytest

from fermicorr.zeta import (
    AccuracyEnvelopeError,
    ZeroSequence,
    counting_estimate,
    find_zeros,
    hardy_z,
    invert_counting_unfold,
    load_zeros_file,
    riemann_siegel_theta,
    unfold_by_counting,
    unfold_zeros,
    write_zeros_file,
    zeta_critical_line,
)

PI = math.pi


class TestZetaEvaluator:
    def test_value_at_origin(self):
        val = zeta_critical_line(0.0)
        assert val.real == pytest.approx(-1.4603545088, abs=1e-9)
        assert val.imag == pytest.approx(0.0, abs=1e-12)

    def test_against_mpmath_oracle(self, rng):
        mp.mp.dps = 25
        for t in rng.uniform(0.0, 500.0, size=40):
            ref = complex(mp.zeta(mp.mpc(0.5, float(t))))
            assert zeta_critical_line(float(t)) == pytest.approx(ref, abs=1e-9)

    def test_against_mpmath_high_band(self, rng):
        mp.mp.dps = 25
        for t in rng.uniform(500.0, 1000.0, size=8):
            ref = complex(mp.zeta(mp.mpc(0.5, float(t))))
            assert zeta_critical_line(float(t)) == pytest.approx(ref, abs=1e-9)

    def test_conjugate_symmetry(self, rng):
        for t in rng.uniform(1.0, 300.0, size=20):
            a = zeta_critical_line(float(t))
            b = zeta_critical_line(-float(t))
            assert b == pytest.approx(a.conjugate(), abs=1e-8)

    def test_term_count_cross_check(self, rng):
        from fermicorr.zeta import _em_terms

        for t in rng.uniform(2.0, 500.0, size=30):
            m = _em_terms(float(t))
            a = zeta_critical_line(float(t), terms=m)
            b = zeta_critical_line(float(t), terms=2 * m)
            assert abs(a - b) <= 1e-8

    def test_envelope_error(self):
        with pytest.raises(AccuracyEnvelopeError):
            zeta_critical_line(1001.0)


class TestTheta:
    def test_plugin_value_at_two_pi(self):
        # -(pi + pi/8) + 1/(96 pi) + 7/(5760 * 8 pi^3)
        expected = -(PI + PI / 8.0) + 1.0 / (96.0 * PI) + 7.0 / (5760.0 * 8.0 * PI ** 3)
        assert riemann_siegel_theta(2.0 * PI) == pytest.approx(expected, abs=1e-15)
        assert riemann_siegel_theta(2.0 * PI) == pytest.approx(-3.5309, abs=1e-4)

    def test_monotone_beyond_stationary_point(self):
        assert riemann_siegel_theta(100.0) > riemann_siegel_theta(50.0)

    def test_derivative_matches_log(self):
        t, h = 100.0, 1e-3
        fd = (riemann_siegel_theta(t + h) - riemann_siegel_theta(t - h)) / (2.0 * h)
        # the 1/(48t) term contributes -1/(48 t^2) = -2.08e-6 to the slope,
        # so the bare (1/2) log(t/2pi) is matched only at that scale
        assert fd == pytest.approx(0.5 * math.log(t / (2.0 * PI)), abs=3e-6)
        full = 0.5 * math.log(t / (2.0 * PI)) - 1.0 / (48.0 * t * t) - 21.0 / (5760.0 * t ** 4)
        assert fd == pytest.approx(full, abs=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            riemann_siegel_theta(0.5)


class TestHardyZ:
    def test_real_within_tolerance(self, rng):
        # defining property: |Im| <= 1e-7 on [5, 500] (checked inside hardy_z)
        for t in rng.uniform(5.0, 500.0, size=300):
            hardy_z(float(t))

    def test_modulus_matches_zeta(self, rng):
        for t in rng.uniform(5.0, 500.0, size=50):
            assert abs(hardy_z(float(t))) == pytest.approx(
                abs(zeta_critical_line(float(t))), abs=1e-9)

    def test_first_zero_bracketed(self):
        assert hardy_z(14.0) * hardy_z(14.2) < 0.0

    def test_low_t_does_not_raise(self):
        for t in (1.0, 1.7, 2.5, 4.0):
            hardy_z(t)


class TestFindZeros:
    def test_first_zero_isolated(self):
        seq = find_zeros(10.0, 15.0, grid_step=0.05)
        assert len(seq) == 1
        assert seq.heights[0] == pytest.approx(14.134725, abs=1e-5)

    def test_first_zero_stable_across_grids(self):
        vals = [find_zeros(10.0, 15.0, grid_step=g).heights[0] for g in (0.1, 0.05, 0.01)]
        assert max(vals) - min(vals) <= 1e-6

    def test_no_zeros_below_first(self):
        seq = find_zeros(1.0, 10.0, grid_step=0.05)
        assert len(seq) == 0

    def test_three_zeros_to_thirty(self):
        seq = find_zeros(10.0, 30.0, grid_step=0.05)
        assert len(seq) == 3
        gaps = np.diff(seq.heights)
        assert np.all(gaps > 3.0)

    def test_counting_consistency(self):
        seq = find_zeros(1.0, 200.0, grid_step=0.05)
        for t_cap in (100.0, 200.0):
            count = int(np.count_nonzero(seq.heights <= t_cap))
            assert abs(count - counting_estimate(t_cap)) <= 2.0

    def test_threaded_scan_matches_serial(self):
        a = find_zeros(10.0, 60.0, grid_step=0.05)
        b = find_zeros(10.0, 60.0, grid_step=0.05, threads=4)
        np.testing.assert_allclose(a.heights, b.heights, atol=1e-12)

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            find_zeros(0.5, 10.0)
        with pytest.raises(ValueError):
            find_zeros(10.0, 1500.0)


class TestZeroSequenceType:
    def test_rejects_small_heights(self):
        with pytest.raises(ValueError):
            ZeroSequence(np.array([0.5, 14.0]))

    def test_ordering_violation_reports_index(self):
        with pytest.raises(ValueError, match="index 2"):
            ZeroSequence(np.array([14.1, 21.0, 20.9]))


class TestUnfolding:
    def test_asymptotic_map_at_two_pi_e(self):
        seq = ZeroSequence(np.array([2.0 * PI * math.e]))
        assert unfold_zeros(seq).values[0] == pytest.approx(math.e, rel=1e-12)

    def test_asymptotic_map_at_two_pi(self):
        seq = ZeroSequence(np.array([2.0 * PI]))
        out = unfold_zeros(seq)
        assert out.values[0] == pytest.approx(0.0, abs=1e-12)
        assert out.flags["below_monotone_height"] == 1

    @pytest.mark.filterwarnings("ignore:zero count")
    def test_counting_map_unit_density_on_desk_window(self):
        # the (50, 500) window's count estimate is off by ~1.2 (S(T)
        # fluctuation), which triggers the advisory counting warning
        zeros = find_zeros(50.0, 500.0, grid_step=0.05)
        spacing = unfold_by_counting(zeros).mean_spacing
        assert abs(spacing - 1.0) <= 0.10

    def test_asymptotic_map_overshoots_at_desk_heights(self):
        # the literal map's spacing is 1 + 1/log(t/2pi), ~1.26 here; this is
        # why statistical pipelines default to the counting map
        zeros = find_zeros(100.0, 500.0, grid_step=0.05)
        spacing = unfold_zeros(zeros).mean_spacing
        assert 1.2 <= spacing <= 1.35

    def test_counting_map_inversion_roundtrip(self):
        w = np.linspace(30.0, 5000.0, 200)
        t = invert_counting_unfold(w)
        np.testing.assert_allclose(counting_estimate(t), w, atol=1e-9)


class TestZeroTableIO:
    def test_three_line_table(self, tmp_path):
        p = tmp_path / "zeros.txt"
        p.write_text("14.134725142\n21.022039639\n25.010857580\n")
        seq = load_zeros_file(str(p))
        assert len(seq) == 3
        assert seq.provenance == "file"
        assert seq.heights[0] == pytest.approx(14.134725142)

    def test_fixture_values_reproduced_by_finder(self, tmp_path):
        # the table freezes our own finder's output before use as a fixture
        found = find_zeros(10.0, 26.0, grid_step=0.05).heights
        np.testing.assert_allclose(found, [14.134725142, 21.022039639, 25.010857580],
                                   atol=1e-6)

    def test_empty_file_is_valid(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("")
        assert len(load_zeros_file(str(p))) == 0

    def test_comments_and_blanks_skipped(self, tmp_path):
        p = tmp_path / "zeros.txt"
        p.write_text("# header\n\n14.1\n# mid\n21.0\n")
        assert len(load_zeros_file(str(p))) == 2

    def test_non_monotone_reports_index(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("14.1\n21.0\n20.9\n")
        with pytest.raises(ValueError, match="index 2"):
            load_zeros_file(str(p))

    def test_parse_error_reports_line(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("14.1\nnot-a-number\n")
        with pytest.raises(ValueError, match="bad.txt:2"):
            load_zeros_file(str(p))

    def test_write_read_roundtrip(self, tmp_path):
        seq = ZeroSequence(np.array([14.134725142, 21.022039639]))
        p = tmp_path / "out.txt"
        write_zeros_file(str(p), seq, header=["test table"])
        back = load_zeros_file(str(p))
        np.testing.assert_allclose(back.heights, seq.heights, atol=1e-12)
