import math

import numpy as np
import pytest

from fermicorr.correlations import (
    CorrelationMatrix,
    PointConfiguration,
    SlaterMetropolis,
    n_body_density_asymptotic,
    n_body_density_finite,
    normalization_residual,
    pair_correlation_theory,
    sample_slater_metropolis,
)
from fermicorr.kernel import FiniteSystem, KernelParams
from fermicorr.verify import slater_density_permutation_sum

PI = math.pi


@pytest.fixture(scope="module")
def sea2():
    return FiniteSystem(1, [0.0, 2 * PI])


@pytest.fixture(scope="module")
def sea3():
    return FiniteSystem(1, [0.0, 2 * PI, -2 * PI])


class TestCorrelationMatrixType:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            CorrelationMatrix(np.array([[1.0, 0.5], [0.4, 1.0]]))

    def test_rejects_bad_diagonal(self):
        with pytest.raises(ValueError, match="diagonal"):
            CorrelationMatrix(np.array([[1.0, 0.0], [0.0, 0.9]]))

    def test_determinant_matches_numpy(self, rng):
        for n in (2, 3, 4):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            m = a @ a.conj().T
            d = np.sqrt(np.diagonal(m).real)
            m = m / np.outer(d, d)
            cm = CorrelationMatrix(m)
            assert cm.determinant() == pytest.approx(np.linalg.det(m).real, rel=1e-12)


class TestFiniteDensity:
    def test_one_point_density_is_unity(self, sea3, rng):
        for _ in range(5):
            assert n_body_density_finite(sea3, [[rng.uniform()]]) == pytest.approx(1.0, abs=1e-12)

    def test_coincident_points_vanish(self, sea3):
        assert n_body_density_finite(sea3, [[0.3], [0.3]]) == pytest.approx(0.0, abs=1e-12)

    def test_hand_evaluated_two_particle_case(self, sea2):
        # K_12 = (1 + e^{i pi})/2 = 0 at separation 1/2; prefactor 2
        rho = n_body_density_finite(sea2, [[0.0], [0.5]])
        assert rho == pytest.approx(2.0, abs=1e-12)

    def test_too_many_points(self, sea2):
        with pytest.raises(ValueError, match="exceeds"):
            n_body_density_finite(sea2, [[0.1], [0.2], [0.3]])

    def test_torus_periodicity(self, sea3, rng):
        pts = rng.uniform(0.0, 1.0, size=(3, 1))
        shifted = pts + np.array([[1.0], [2.0], [-1.0]])
        a = n_body_density_finite(sea3, pts)
        b = n_body_density_finite(sea3, shifted)
        assert a == pytest.approx(b, abs=1e-10)

    def test_exchange_symmetry(self, sea3, rng):
        pts = rng.uniform(0.0, 1.0, size=3)
        base = n_body_density_finite(sea3, pts)
        for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
            assert n_body_density_finite(sea3, pts[perm]) == pytest.approx(base, abs=1e-12)


class TestAsymptoticDensity:
    def test_single_point(self):
        p = KernelParams(nu=0.5, k_f=PI)
        assert n_body_density_asymptotic(p, [[0.0]]) == 1.0

    def test_pair_at_half_separation(self):
        p = KernelParams(nu=0.5, k_f=PI)
        rho = n_body_density_asymptotic(p, [[0.0], [0.5]])
        assert rho == pytest.approx(1.0 - (2.0 / PI) ** 2, rel=1e-10)
        assert rho == pytest.approx(0.5947153, abs=1e-7)

    def test_three_points_at_kernel_zeros(self):
        # pairwise separations map to k_F r in {pi, 2pi}: identity matrix
        p = KernelParams(nu=0.5, k_f=PI)
        rho = n_body_density_asymptotic(p, [[0.0], [1.0], [2.0]])
        assert rho == pytest.approx(1.0, abs=1e-12)

    def test_pauli_suppression_series(self):
        # small-separation law (k_F r)^2 / 3 at nu = 1/2
        p = KernelParams(nu=0.5, k_f=PI)
        x = 1e-3
        rho = n_body_density_asymptotic(p, [[0.0], [x / PI]])
        assert rho == pytest.approx(x * x / 3.0, rel=0.01)


class TestPairCorrelationTheory:
    def test_zero_at_origin(self):
        assert pair_correlation_theory(0.5, 0.0) == 0.0

    def test_value_at_half(self):
        assert pair_correlation_theory(0.5, 0.5) == pytest.approx(0.5947153, abs=1e-7)

    def test_unity_at_integer_w(self):
        assert pair_correlation_theory(0.5, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_in_unit_interval_and_limit(self, rng):
        for nu in (0.5, 1.0, 1.5, 2.5):
            w = rng.uniform(0.0, 50.0, size=200)
            vals = np.array([pair_correlation_theory(nu, wi) for wi in w])
            assert np.all((vals >= 0.0) & (vals <= 1.0))
        far = pair_correlation_theory(0.5, 1e3 + 0.37)
        assert far == pytest.approx(1.0, abs=1e-5)

    def test_orders_differ(self):
        a = pair_correlation_theory(0.5, 0.5)
        b = pair_correlation_theory(1.5, 0.5)
        assert abs(a - b) > 1e-3


class TestNormalization:
    def test_n2_full_density_normalized(self, sea2):
        assert normalization_residual(sea2, 2, quadrature_points=32) <= 1e-8

    def test_n3_full_density_normalized(self, sea3):
        assert normalization_residual(sea3, 3, quadrature_points=32) <= 1e-6

    def test_marginal_of_two_is_flat(self, sea2):
        assert normalization_residual(sea2, 1, quadrature_points=32) <= 1e-10

    def test_stable_under_order_doubling(self, sea3):
        a = normalization_residual(sea3, 2, quadrature_points=32)
        b = normalization_residual(sea3, 2, quadrature_points=64)
        assert abs(a - b) <= 1e-8

    def test_rejects_higher_dimension(self):
        sea = FiniteSystem.fermi_sea(2, 5)
        with pytest.raises(ValueError, match="d = 1"):
            normalization_residual(sea, 2)


class TestPermutationSumOracle:
    def test_determinant_route_matches_brute_force(self, rng):
        for n in (1, 2, 3):
            sea = FiniteSystem.fermi_sea(1, n)
            for _ in range(34):
                pts = rng.uniform(0.0, 1.0, size=(n, 1))
                brute = slater_density_permutation_sum(sea, pts)
                det = n_body_density_finite(sea, pts)
                assert det == pytest.approx(brute, abs=1e-10)

    def test_asymmetric_sea_matches_too(self, sea2, rng):
        for _ in range(20):
            pts = rng.uniform(0.0, 1.0, size=(2, 1))
            brute = slater_density_permutation_sum(sea2, pts)
            assert n_body_density_finite(sea2, pts) == pytest.approx(brute, abs=1e-12)


class TestMetropolis:
    def test_chain_state_is_explicit_and_seeded(self, sea3):
        a = SlaterMetropolis(sea3, seed=7)
        b = SlaterMetropolis(sea3, seed=7)
        for _ in range(50):
            np.testing.assert_array_equal(a.step(), b.step())
        c = SlaterMetropolis(sea3, seed=8)
        c.run(50)
        assert not np.array_equal(a.points, c.points)

    def test_single_particle_uniform_ks(self):
        # step 0.5 makes proposals cover the torus, so samples are iid uniform
        sea1 = FiniteSystem(1, [0.0])
        chain = SlaterMetropolis(sea1, seed=3, step_size=0.5)
        xs = chain.run(100_000).ravel()
        xs.sort()
        emp = np.arange(1, xs.size + 1) / xs.size
        ks = float(np.max(np.abs(emp - xs)))
        assert ks < 0.02

    def test_generator_yields_configurations(self, sea2):
        gen = sample_slater_metropolis(sea2, n_steps=10, burn_in=10, seed=1)
        configs = list(gen)
        assert len(configs) == 10
        assert all(isinstance(c, PointConfiguration) and len(c) == 2 for c in configs)
        assert all(0.0 <= x < 1.0 for c in configs for x in c.points.ravel())

    def test_three_particle_coincidence_suppressed(self, sea3, rng):
        chain = SlaterMetropolis(sea3, seed=5, step_size=0.5)
        chain.run(2_000)
        samples = chain.run(60_000)
        def min_sep(row):
            d = np.abs(row[:, None] - row[None, :])[np.triu_indices(3, 1)]
            return np.minimum(d, 1.0 - d).min()
        frac = np.mean([min_sep(row) < 0.01 for row in samples])
        uni = rng.uniform(0.0, 1.0, size=(60_000, 3))
        frac_uniform = np.mean([min_sep(row) < 0.01 for row in uni])
        assert frac < 0.5 * frac_uniform

    def test_zero_density_start_resamples(self, sea2):
        # plenty of attempts always find a positive-density start
        chain = SlaterMetropolis(sea2, seed=0)
        assert chain.density > 0.0
