"""Shared fixtures for parallax tests."""
import numpy as np
import pytest

from parallax.linalg import Tolerance, random_matrix, svd


@pytest.fixture
def rng():
    """Seeded generator so every test run sees the same matrices."""
    return np.random.default_rng(20240601)


@pytest.fixture
def fast_tol():
    """Coarser search grid for tests that run many decisions."""
    return Tolerance(grid_points=180, refine_iters=50)


@pytest.fixture
def make_op_parallel(rng):
    """Factory for pairs (A, B) with A || B in the operator norm.

    B = c * tau * u1 v1* + P Z Q, where u1, v1 are the top singular vectors
    of A and P, Q project onto their orthogonal complements. The second term
    is scaled below tau |c|, so ||B|| = tau |c| and
    ||A + lambda B|| >= |s1 + lambda c tau| = ||A|| + ||B|| at lambda = conj(c)/|c|.
    """
    def _make(n: int, c: complex = 1.0 + 0.5j, tau: float = 1.3):
        a = random_matrix(rng, n)
        dec = svd(a)
        u1 = dec.u[:, :1]
        v1 = dec.v[:, :1]
        p = np.eye(n) - u1 @ u1.conj().T
        q = np.eye(n) - v1 @ v1.conj().T
        rest = p @ random_matrix(rng, n) @ q
        rest_norm = np.linalg.norm(rest, 2)
        if rest_norm > 0:
            rest *= 0.5 * tau * abs(c) / rest_norm
        b = c * tau * (u1 @ v1.conj().T) + rest
        return a, b
    return _make


@pytest.fixture
def make_shared_row_pair(rng):
    """Factory for complex 3x3 pairs parallel in the induced linf norm.

    Row 0 dominates both matrices and is phase-aligned under a random
    rotation, except that B has mass where A's row 0 is zero. A || B holds
    through that row, while the conjugate-phase rows of A put phase 1 on
    the zero entry and miss B's phase there.
    """
    def _make():
        phases = np.exp(2j * np.pi * rng.random(3))
        lam = phases[2]
        a = np.zeros((3, 3), dtype=np.complex128)
        a[0, :2] = phases[:2]
        a[1:] = random_matrix(rng, 2, 3)
        a[1:] *= 1.0 / np.abs(a[1:]).sum(axis=1, keepdims=True)

        b = np.zeros((3, 3), dtype=np.complex128)
        b[0, :2] = np.conj(lam) * phases[:2] * (0.5 + rng.random(2))
        b[0, 2] = 0.5 * np.exp(2j * np.pi * rng.random())
        b[1:] = random_matrix(rng, 2, 3)
        b[1:] *= 0.5 / np.abs(b[1:]).sum(axis=1, keepdims=True)
        return a, b
    return _make
