"""Tests for matrix norms, their duals and the norm handle grammar."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from parallax.errors import BadHandleError, NotSquareError, ParseError
from parallax.linalg import random_matrix
from parallax.norms import (
    SPECTRAL,
    TRACE,
    NormHandle,
    NormKind,
    VectorNormTag,
    check_handle,
    conjugate_exponent,
    dual_norm,
    matrix_norm,
    norms_of_stack,
    trace_inner,
    vector_norm,
)

HANDLES = [
    NormHandle.schatten(1),
    NormHandle.schatten(1.5),
    NormHandle.schatten(2),
    SPECTRAL,
    NormHandle.kyfan(1),
    NormHandle.kyfan(2),
    NormHandle.induced("l1"),
    NormHandle.induced("l2"),
    NormHandle.induced("linf"),
]

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
real_3x3 = arrays(np.float64, (3, 3), elements=entries)


def test_examples():
    """Test the worked norm values."""
    assert matrix_norm(np.diag([3, 4]), NormHandle.schatten(2)) == pytest.approx(5.0)
    assert matrix_norm(np.diag([3, 1, 2]), NormHandle.kyfan(2)) == pytest.approx(5.0)
    assert matrix_norm([[1, -1], [0, 1]], NormHandle.induced("linf")) == pytest.approx(2.0)
    assert matrix_norm([[1, -1], [0, 1]], NormHandle.induced("l1")) == pytest.approx(2.0)
    assert matrix_norm([[1, 2], [3, 4]], NormHandle.induced("l2")) == pytest.approx(np.linalg.norm([[1, 2], [3, 4]], 2))


def test_vector_norms():
    """Test the three vector norms on (3, 4)."""
    assert vector_norm([3, 4], VectorNormTag.L1) == pytest.approx(7.0)
    assert vector_norm([3, 4], VectorNormTag.L2) == pytest.approx(5.0)
    assert vector_norm([3, -4j], VectorNormTag.LINF) == pytest.approx(4.0)


def test_kyfan_endpoints(rng):
    """Test that KyFan(1) is the spectral norm and KyFan(n) the trace norm."""
    a = random_matrix(rng, 4)
    assert matrix_norm(a, NormHandle.kyfan(1)) == pytest.approx(matrix_norm(a, SPECTRAL))
    assert matrix_norm(a, NormHandle.kyfan(4)) == pytest.approx(matrix_norm(a, TRACE))


def test_monotone_families(rng):
    """Test that Ky-Fan norms grow with k and Schatten norms shrink with p."""
    a = random_matrix(rng, 5)
    kf = [matrix_norm(a, NormHandle.kyfan(k)) for k in range(1, 6)]
    assert all(x <= y + 1e-12 for x, y in zip(kf, kf[1:]))
    sp = [matrix_norm(a, NormHandle.schatten(p)) for p in (1, 1.5, 2, 3, 10, math.inf)]
    assert all(x >= y - 1e-12 for x, y in zip(sp, sp[1:]))


def test_large_p_does_not_overflow():
    a = np.diag([1e200, 1e199])
    assert matrix_norm(a, NormHandle.schatten(4)) == pytest.approx(1e200, rel=1e-3)


def test_stack_matches_single(rng):
    stack = np.stack([random_matrix(rng, 3) for _ in range(4)])
    for h in HANDLES:
        expected = [matrix_norm(m, h) for m in stack]
        np.testing.assert_allclose(norms_of_stack(stack, h), expected, rtol=1e-12)


@settings(max_examples=25, deadline=None)
@given(re_a=real_3x3, im_a=real_3x3, re_b=real_3x3, scale=st.complex_numbers(max_magnitude=5, allow_nan=False))
def test_norm_axioms(re_a, im_a, re_b, scale):
    """Test positivity, absolute homogeneity and the triangle inequality."""
    a = re_a + 1j * im_a
    b = re_b.astype(np.complex128)
    for h in HANDLES:
        na, nb = matrix_norm(a, h), matrix_norm(b, h)
        assert na >= 0
        assert matrix_norm(a + b, h) <= na + nb + 1e-9 * (1 + na + nb)
        assert matrix_norm(scale * a, h) == pytest.approx(abs(scale) * na, rel=1e-9, abs=1e-9)


def test_zero_has_zero_norm():
    for h in HANDLES:
        assert matrix_norm(np.zeros((3, 3)), h) == 0.0


class TestTraceInner:
    def test_examples(self):
        assert trace_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)
        assert trace_inner([[0, 1], [0, 0]], [[0, 0], [1, 0]]) == pytest.approx(0.0)
        assert trace_inner([[1j]], [[1]]) == pytest.approx(1j)

    def test_conjugate_symmetric(self, rng):
        a, b = random_matrix(rng, 3), random_matrix(rng, 3)
        assert trace_inner(a, b) == pytest.approx(np.conj(trace_inner(b, a)))


class TestDualNorm:
    def test_closed_forms(self):
        assert dual_norm(np.diag([3, 4]), NormHandle.schatten(2)) == pytest.approx(5.0)
        assert dual_norm(np.eye(2), SPECTRAL) == pytest.approx(2.0)
        assert dual_norm(np.eye(2), TRACE) == pytest.approx(1.0)
        assert dual_norm(np.diag([3, 1, 1]), NormHandle.kyfan(2)) == pytest.approx(3.0)
        assert dual_norm(np.diag([1, 1, 1]), NormHandle.kyfan(2)) == pytest.approx(1.5)

    def test_zero(self):
        for h in (TRACE, SPECTRAL, NormHandle.kyfan(2)):
            assert dual_norm(np.zeros((3, 3)), h) == 0.0

    def test_dual_of_dual(self, rng):
        """Test that the Schatten dual of the dual exponent returns the original norm."""
        a = random_matrix(rng, 4)
        for p in (1.0, 1.5, 3.0, math.inf):
            q = conjugate_exponent(p)
            assert dual_norm(a, NormHandle.schatten(q)) == pytest.approx(matrix_norm(a, NormHandle.schatten(p)))

    def test_pairing_inequality(self, rng):
        """Test |tr(AB*)| <= ||B||_h * dual_h(A) for unitarily invariant norms."""
        for _ in range(10):
            a, b = random_matrix(rng, 4), random_matrix(rng, 4)
            for h in (TRACE, NormHandle.schatten(3), SPECTRAL, NormHandle.kyfan(2)):
                assert abs(trace_inner(a, b)) <= matrix_norm(b, h) * dual_norm(a, h) + 1e-9

    def test_non_square(self):
        with pytest.raises(NotSquareError):
            dual_norm(np.ones((2, 3)), TRACE)


class TestHandles:
    @pytest.mark.parametrize("text,expected", [
        ("schatten:inf", SPECTRAL),
        ("schatten:1", TRACE),
        ("schatten:1.5", NormHandle.schatten(1.5)),
        ("kyfan:2", NormHandle.kyfan(2)),
        ("induced:linf", NormHandle.induced("linf")),
        (" induced : l1 ", NormHandle.induced("l1")),
    ])
    def test_parse(self, text, expected):
        assert NormHandle.parse(text) == expected

    def test_str_roundtrip(self):
        for h in HANDLES:
            assert NormHandle.parse(str(h)) == h

    @pytest.mark.parametrize("text", ["foo:1", "schatten", "kyfan:two", "induced:l3", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(ParseError):
            NormHandle.parse(text)

    def test_bad_parameters(self):
        with pytest.raises(BadHandleError, match="Schatten p"):
            NormHandle.parse("schatten:0.5")
        with pytest.raises(BadHandleError, match="Ky-Fan k"):
            NormHandle.kyfan(0)

    def test_check_handle(self):
        with pytest.raises(NotSquareError):
            check_handle((2, 3), NormHandle.induced("l2"))
        with pytest.raises(BadHandleError, match="exceeds"):
            check_handle((2, 2), NormHandle.kyfan(3))
        check_handle((2, 3), NormHandle.schatten(2))

    def test_unitary_invariance_flag(self):
        assert NormHandle.kyfan(1).is_unitarily_invariant
        assert not NormHandle.induced("l1").is_unitarily_invariant
        assert NormHandle.induced("l1").kind == NormKind.INDUCED

    def test_dual_tags(self):
        assert VectorNormTag.L1.dual == VectorNormTag.LINF
        assert VectorNormTag.L2.dual == VectorNormTag.L2
