"""Tests for the Hilbert K(H)-module simulator."""
import numpy as np
import pytest

from parallax.errors import (
    BadBasisError,
    BadDimensionError,
    InputError,
    NotIdempotentError,
    NotMinimalError,
    NotUnitError,
    ShapeMismatchError,
)
from parallax.kmodule import (
    ModuleElement,
    corollary_idempotent_check,
    inner_range_check,
    is_minimal_projection,
    is_orthonormal_system,
    minimal_projection,
    mod_inner,
    module_norm,
    module_parallel,
    orthonormal_basis,
    thm_a_check,
    thm_b_search,
    thm_L_check,
    transitivity_check,
)
from parallax.linalg import random_matrix, random_unit_vectors

E1 = np.array([1.0, 0.0])


@pytest.fixture
def basis2():
    """x_1, x_2 in M_{2x2} built from xi = e1."""
    return orthonormal_basis(E1, 2)


class TestInnerProduct:
    def test_examples(self):
        x = np.array([[1.0, 0.0], [0.0, 0.0]])
        np.testing.assert_allclose(mod_inner(x, x), x)
        np.testing.assert_allclose(mod_inner(x, [[0, 1], [0, 0]]), np.zeros((2, 2)))

    def test_conjugate_symmetric_and_positive(self, rng):
        x, y = random_matrix(rng, 3, 2), random_matrix(rng, 3, 2)
        np.testing.assert_allclose(mod_inner(x, y), mod_inner(y, x).conj().T)
        assert np.linalg.eigvalsh(mod_inner(x, x)).min() >= -1e-12

    def test_left_module_law(self, rng):
        """Test <a x, y> = a <x, y>."""
        x, y = ModuleElement(random_matrix(rng, 3, 2)), random_matrix(rng, 3, 2)
        a = random_matrix(rng, 3)
        np.testing.assert_allclose(mod_inner(x.act(a), y), a @ mod_inner(x, y), atol=1e-12)

    def test_norm_is_square_root_of_inner_norm(self, rng):
        x = random_matrix(rng, 3, 4)
        inner = np.linalg.norm(mod_inner(x, x), 2)
        assert module_norm(x) == pytest.approx(np.sqrt(inner), rel=1e-12)
        assert ModuleElement(x).norm == module_norm(x)
        assert ModuleElement(x).d == 3 and ModuleElement(x).n == 4

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            mod_inner(np.ones((2, 2)), np.ones((2, 3)))


class TestBasis:
    def test_minimal_projection(self):
        p = minimal_projection(E1)
        np.testing.assert_allclose(p, np.diag([1.0, 0.0]))
        assert is_minimal_projection(p)
        assert not is_minimal_projection(np.eye(2))
        assert not is_minimal_projection(2 * p)

    def test_non_unit(self):
        with pytest.raises(NotUnitError):
            minimal_projection([1.0, 1.0])

    def test_orthonormal_basis(self, rng):
        xi = random_unit_vectors(rng, 1, 3)[0]
        basis = orthonormal_basis(xi, 4)
        assert len(basis.elements) == 4
        assert is_orthonormal_system(basis.elements)
        np.testing.assert_allclose(basis.projection, np.outer(xi, xi.conj()))
        for i, x in enumerate(basis.elements):
            np.testing.assert_allclose(x.mat[:, i], xi)

    def test_not_orthonormal(self, basis2):
        assert not is_orthonormal_system([basis2.elements[0], basis2.elements[0]])
        assert not is_orthonormal_system([])


class TestTheoremA:
    def test_multiple(self, rng):
        x = random_matrix(rng, 3, 2)
        check = thm_a_check(x, 2 * x)
        assert check.lhs_parallel and check.rhs_holds

    def test_basis_elements(self, basis2):
        check = thm_a_check(*basis2.elements)
        assert not check.lhs_parallel
        assert not check.rhs_holds

    def test_constructed_parallel(self, make_op_parallel):
        a, b = make_op_parallel(3)
        check = thm_a_check(a, b)
        assert check.lhs_parallel
        assert check.agrees

    def test_random_pairs_agree(self, rng, fast_tol):
        for _ in range(5):
            x, y = random_matrix(rng, 2, 3), random_matrix(rng, 2, 3)
            assert thm_a_check(x, y, fast_tol).agrees

    def test_zero_x(self):
        assert thm_a_check(np.zeros((2, 2)), np.eye(2)) == (True, True)


class TestTheoremL:
    def test_examples(self, basis2):
        x1, x2 = basis2.elements
        assert thm_L_check(x1, x1) == (True, True)
        assert thm_L_check(x1, x2) == (False, False)

    def test_random_partners_agree(self, rng, fast_tol):
        xi = random_unit_vectors(rng, 1, 3)[0]
        x = orthonormal_basis(xi, 3).elements[1]
        for y in (random_matrix(rng, 3, 3), (0.5 + 2j) * x.mat):
            assert thm_L_check(x, y, fast_tol).agrees

    def test_requires_minimal_projection(self, basis2):
        with pytest.raises(NotMinimalError):
            thm_L_check(2 * basis2.elements[0].mat, basis2.elements[1])


def test_inner_range_check(rng, fast_tol):
    x = random_matrix(rng, 3, 2)
    assert inner_range_check(x, (1 - 2j) * x, fast_tol) == (True, True)
    assert inner_range_check(x, random_matrix(rng, 3, 2), fast_tol).agrees


class TestIdempotentCorollary:
    def test_self(self, basis2, fast_tol):
        x1 = basis2.elements[0]
        assert corollary_idempotent_check(x1, x1, fast_tol) == (True, True)

    def test_complex_multiple(self, basis2, fast_tol):
        x1 = basis2.elements[0]
        assert corollary_idempotent_check(x1, (2 - 1j) * x1.mat, fast_tol) == (True, True)

    def test_parallel_non_multiple(self, basis2, fast_tol):
        y = np.diag([1.0, 0.5])
        assert corollary_idempotent_check(basis2.elements[0], y, fast_tol) == (True, True)

    def test_distinct_basis_elements(self, basis2, fast_tol):
        assert corollary_idempotent_check(*basis2.elements, fast_tol) == (False, False)

    def test_random_partner(self, basis2, rng, fast_tol):
        assert corollary_idempotent_check(basis2.elements[0], random_matrix(rng, 2, 2), fast_tol).agrees

    def test_zero_partner(self, basis2):
        assert corollary_idempotent_check(basis2.elements[0], np.zeros((2, 2))) == (True, True)

    def test_requires_idempotent(self, basis2):
        with pytest.raises(NotIdempotentError):
            corollary_idempotent_check(2 * basis2.elements[0].mat, basis2.elements[1])


class TestTheoremB:
    def test_no_common_parallel(self, basis2, fast_tol):
        """Test that no x comes close to being parallel to both basis elements."""
        worst = thm_b_search(basis2, trials=10, tol=fast_tol, seed=1)
        assert worst < -1e-2

    def test_deterministic(self, basis2, fast_tol):
        assert thm_b_search(basis2, 3, fast_tol, seed=4) == thm_b_search(basis2, 3, fast_tol, seed=4)

    def test_errors(self):
        with pytest.raises(BadBasisError):
            thm_b_search(orthonormal_basis(E1, 1), 5)
        with pytest.raises(InputError, match="trials"):
            thm_b_search(orthonormal_basis(E1, 2), 0)


class TestTransitivity:
    def test_multiples(self, rng):
        y = random_unit_vectors(rng, 1, 3)[0][:, None]
        check = transitivity_check(2j * y, y, (1 - 1j) * y)
        assert check.premises and check.conclusion
        assert not check.violated

    def test_orthogonal_premise(self):
        check = transitivity_check([[0.0], [1.0]], [[1.0], [0.0]], [[3.0], [0.0]])
        assert not check.premises
        assert not check.violated

    def test_random_triples_never_violate(self, rng, fast_tol):
        for _ in range(10):
            y = random_unit_vectors(rng, 1, 4)[0][:, None]
            x = (rng.standard_normal() + 1j * rng.standard_normal()) * y
            z = random_matrix(rng, 4, 1)
            assert not transitivity_check(x, y, z, fast_tol).violated

    def test_errors(self):
        with pytest.raises(BadDimensionError):
            transitivity_check(np.eye(2), np.eye(2), np.eye(2))
        with pytest.raises(NotUnitError):
            transitivity_check([[1.0], [0.0]], [[2.0], [0.0]], [[1.0], [0.0]])


def test_module_parallel_matches_spectral(rng):
    x = random_matrix(rng, 2, 3)
    assert module_parallel(x, 3 * x).parallel
    assert not module_parallel(x, random_matrix(rng, 2, 3)).parallel
