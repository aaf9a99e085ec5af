import numpy as np
import pytest

from nmheom import (
    CouplingOperator,
    IDENTITY,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    check_density_matrix,
    commutator,
    dagger,
    hermitian_eigenvalues,
    is_density_matrix,
    phase_unitary,
    trace_distance,
)

from conftest import random_density_matrix


class TestCommutator:
    def test_self_commutator_is_zero(self):
        assert np.array_equal(commutator(SIGMA_Z, SIGMA_Z), np.zeros((2, 2)))

    def test_sigma_z_with_lowering(self):
        # hand evaluation: sz sm - sm sz = -2 sm
        assert np.array_equal(commutator(SIGMA_Z, SIGMA_MINUS), -2.0 * SIGMA_MINUS)

    def test_raising_with_lowering(self):
        assert np.array_equal(commutator(SIGMA_PLUS, SIGMA_MINUS), SIGMA_Z)

    def test_antisymmetry_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            assert np.array_equal(commutator(a, b), -commutator(b, a))


class TestTraceDistance:
    def test_orthogonal_pure_states(self):
        e = np.diag([1.0, 0.0]).astype(complex)
        g = np.diag([0.0, 1.0]).astype(complex)
        assert trace_distance(e, g) == pytest.approx(1.0, abs=1e-15)

    def test_identical_states(self):
        rho = random_density_matrix(np.random.default_rng(3))
        assert trace_distance(rho, rho) == 0.0

    def test_diagonal_example(self):
        r1 = np.diag([0.75, 0.25]).astype(complex)
        r2 = np.diag([0.25, 0.75]).astype(complex)
        assert trace_distance(r1, r2) == pytest.approx(0.5, abs=1e-15)

    def test_range_and_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            r1 = random_density_matrix(rng)
            r2 = random_density_matrix(rng)
            d12 = trace_distance(r1, r2)
            assert 0.0 <= d12 <= 1.0
            assert d12 == trace_distance(r2, r1)

    def test_triangle_inequality_on_random_triples(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(1000):
            a = random_density_matrix(rng)
            b = random_density_matrix(rng)
            c = random_density_matrix(rng)
            violation = trace_distance(a, c) - (
                trace_distance(a, b) + trace_distance(b, c)
            )
            worst = max(worst, violation)
        assert worst < 1e-12

    def test_unitary_invariance(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            r1 = random_density_matrix(rng)
            r2 = random_density_matrix(rng)
            u = phase_unitary(rng.uniform(-5, 5), rng.uniform(0, 20))
            rot = trace_distance(u @ r1 @ dagger(u), u @ r2 @ dagger(u))
            assert abs(rot - trace_distance(r1, r2)) < 1e-12

    def test_rejects_non_hermitian_difference(self):
        rho = np.diag([0.5, 0.5]).astype(complex)
        corrupted = rho + np.array([[0.0, 1e-3], [0.0, 0.0]])
        with pytest.raises(ValueError, match="hermitian"):
            trace_distance(rho, corrupted)

    def test_symmetrizes_within_tolerance(self):
        rho = np.diag([0.5, 0.5]).astype(complex)
        nudged = rho + np.array([[0.0, 1e-10], [0.0, 0.0]])
        assert trace_distance(rho, nudged) < 1e-9

    def test_broadcasts_over_leading_axes(self):
        rng = np.random.default_rng(17)
        r1 = np.stack([random_density_matrix(rng) for _ in range(6)])
        r2 = np.stack([random_density_matrix(rng) for _ in range(6)])
        batch = trace_distance(r1, r2)
        assert batch.shape == (6,)
        for k in range(6):
            assert batch[k] == pytest.approx(trace_distance(r1[k], r2[k]), abs=1e-15)


class TestHermitianEigenvalues:
    def test_matches_numpy_on_random_hermitian(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            h = a + dagger(a)
            mine = hermitian_eigenvalues(h)
            ref = np.linalg.eigvalsh(h)
            assert np.allclose(mine, ref, atol=1e-12)


class TestPhaseUnitary:
    def test_zero_time_is_identity(self):
        assert np.array_equal(phase_unitary(3.7, 0.0), IDENTITY)

    def test_half_period_is_minus_identity(self):
        u = phase_unitary(2.0, np.pi)
        assert np.allclose(u, -IDENTITY, atol=1e-15)

    def test_unitarity_random(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            u = phase_unitary(rng.uniform(-10, 10), rng.uniform(0, 100))
            assert np.allclose(u @ dagger(u), IDENTITY, atol=1e-12)


class TestCouplingOperator:
    def test_chi_zero_is_lowering(self):
        assert np.array_equal(CouplingOperator(chi=0.0).matrix, SIGMA_MINUS)

    def test_chi_one_has_equal_off_diagonals(self):
        m = CouplingOperator(chi=1.0).matrix
        assert m[0, 1] == m[1, 0] == 1.0
        assert m[0, 0] == m[1, 1] == 0.0

    @pytest.mark.parametrize("chi", [-0.1, 1.5])
    def test_rejects_out_of_range(self, chi):
        with pytest.raises(ValueError):
            CouplingOperator(chi=chi)


class TestDensityMatrixChecks:
    def test_accepts_random_states(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            check_density_matrix(random_density_matrix(rng))

    def test_rejects_bad_trace(self):
        assert not is_density_matrix(np.diag([0.9, 0.2]).astype(complex))

    def test_rejects_negative_eigenvalue(self):
        assert not is_density_matrix(np.diag([1.2, -0.2]).astype(complex))

    def test_rejects_non_hermitian(self):
        rho = np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex)
        assert not is_density_matrix(rho)
