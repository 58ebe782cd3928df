"""Tests for the dense linear algebra kernels."""
import numpy as np
import pytest

from parallax.errors import InputError, NonFiniteError, NotHermitianError, ShapeMismatchError, ZeroMatrixError
from parallax.linalg import (
    Tolerance,
    as_matrix,
    herm_eig,
    random_matrix,
    random_unit_vectors,
    random_unitary,
    svd,
    top_singular_subspace,
    unit_circle,
)


class TestSvd:
    def test_diagonal_singular_values_are_sorted(self):
        dec = svd(np.diag([3.0, 4.0]))
        np.testing.assert_allclose(dec.singular_values, [4.0, 3.0])

    def test_zero_matrix(self):
        dec = svd(np.zeros((2, 2)))
        np.testing.assert_allclose(dec.singular_values, [0.0, 0.0])
        np.testing.assert_allclose(dec.u.conj().T @ dec.u, np.eye(2), atol=1e-12)

    def test_random_reconstruction(self, rng):
        a = random_matrix(rng, 4)
        dec = svd(a)
        assert np.linalg.norm(a - dec.reconstruct()) <= 1e-10 * max(1.0, dec.s1)
        assert np.linalg.norm(dec.u.conj().T @ dec.u - np.eye(4)) <= 1e-10
        assert np.linalg.norm(dec.v.conj().T @ dec.v - np.eye(4)) <= 1e-10
        assert np.all(np.diff(dec.singular_values) <= 0)

    def test_rectangular_is_thin(self, rng):
        dec = svd(random_matrix(rng, 5, 3))
        assert dec.u.shape == (5, 3)
        assert dec.v.shape == (3, 3)
        assert dec.singular_values.shape == (3,)

    def test_phase_convention(self, rng):
        """Largest-modulus entry of each u column is real positive."""
        dec = svd(random_matrix(rng, 4))
        for j in range(4):
            col = dec.u[:, j]
            lead = col[np.argmax(np.abs(col))]
            assert abs(lead.imag) < 1e-12
            assert lead.real > 0

    def test_adjoint_has_same_singular_values(self, rng):
        a = random_matrix(rng, 4, 3)
        np.testing.assert_allclose(svd(a).singular_values, svd(a.conj().T).singular_values, rtol=1e-12)


class TestHermEig:
    def test_diagonal(self):
        w, _ = herm_eig(np.diag([1.0, -2.0]))
        np.testing.assert_allclose(w, [1.0, -2.0])

    def test_pauli_x(self):
        w, _ = herm_eig(np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(w, [1.0, -1.0], atol=1e-14)

    def test_random_hermitian_residual(self, rng):
        z = random_matrix(rng, 5)
        h = (z + z.conj().T) / 2
        w, q = herm_eig(h)
        scale = max(1.0, np.linalg.norm(h))
        assert np.linalg.norm(h @ q - q * w) <= 1e-10 * scale
        assert np.linalg.norm(q.conj().T @ q - np.eye(5)) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            herm_eig(np.array([[0, 1], [0, 0]]))


class TestTopSingularSubspace:
    def test_simple_top(self):
        top = top_singular_subspace(np.diag([2.0, 1.0]))
        assert top.multiplicity == 1
        np.testing.assert_allclose(top.u1[:, 0], [1, 0], atol=1e-14)
        np.testing.assert_allclose(top.v1[:, 0], [1, 0], atol=1e-14)

    def test_identity_is_fully_degenerate(self):
        top = top_singular_subspace(np.eye(2))
        assert top.multiplicity == 2
        np.testing.assert_allclose(top.u1 @ top.u1.conj().T, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(top.v1, top.u1, atol=1e-12)

    def test_tie_within_tolerance(self):
        top = top_singular_subspace(np.diag([1.0, 1.0 - 1e-12, 0.5]))
        assert top.multiplicity == 2

    def test_maps_back(self, rng):
        """A v1 = s1 u1 column by column."""
        a = random_matrix(rng, 4)
        top = top_singular_subspace(a)
        s1 = np.linalg.norm(a, 2)
        np.testing.assert_allclose(a @ top.v1, s1 * top.u1, atol=1e-10)

    def test_multiplicity_scale_invariant(self, rng):
        a = np.diag([3.0, 3.0, 1.0]) @ random_unitary(rng, 3)
        assert top_singular_subspace(a).multiplicity == top_singular_subspace(7.5 * a).multiplicity == 2

    def test_zero_matrix(self):
        with pytest.raises(ZeroMatrixError):
            top_singular_subspace(np.zeros((3, 3)))


class TestValidation:
    def test_nan_rejected(self):
        with pytest.raises(NonFiniteError):
            as_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))

    def test_vector_rejected(self):
        with pytest.raises(ShapeMismatchError):
            as_matrix(np.ones(3))

    def test_empty_rejected(self):
        with pytest.raises(ShapeMismatchError):
            as_matrix(np.zeros((0, 2)))

    def test_complex_conversion(self):
        assert as_matrix([[1, 2], [3, 4]]).dtype == np.complex128

    def test_tolerance_validation(self):
        with pytest.raises(InputError):
            Tolerance(abs_tol=0.0)
        with pytest.raises(InputError):
            Tolerance(grid_points=4)

    def test_threshold(self):
        tol = Tolerance(abs_tol=1e-8, rel_tol=1e-6)
        assert tol.threshold(100.0) == pytest.approx(1e-8 + 1e-4)


class TestSampling:
    def test_unit_vectors(self, rng):
        v = random_unit_vectors(rng, 50, 4)
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0)

    def test_unitary(self, rng):
        for n in (1, 3):
            u = random_unitary(rng, n)
            np.testing.assert_allclose(u @ u.conj().T, np.eye(n), atol=1e-12)

    def test_unit_circle(self):
        thetas = unit_circle(8)
        assert thetas[0] == 0.0
        assert thetas[-1] < 2 * np.pi
        assert len(thetas) == 8
