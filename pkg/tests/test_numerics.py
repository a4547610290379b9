"""Condition numbers and the complex-to-real embedding."""

import numpy as np
import pytest

from lrmimo.errors import SingularInput
from lrmimo.numerics import complex_to_real, condition_number, embed_vector


class TestConditionNumber:
    def test_identity(self):
        assert condition_number(np.eye(4)) == pytest.approx(1.0)

    def test_diagonal(self):
        assert condition_number(np.diag([10.0, 1.0])) == pytest.approx(10.0)

    def test_matches_independent_svd(self):
        rng = np.random.default_rng(101)
        for _ in range(50):
            M = rng.normal(size=(4, 4))
            assert condition_number(M) == pytest.approx(np.linalg.cond(M), rel=1e-9)

    def test_rectangular(self):
        rng = np.random.default_rng(5)
        M = rng.normal(size=(12, 6))
        assert condition_number(M) == pytest.approx(np.linalg.cond(M), rel=1e-9)

    def test_scale_invariance(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            M = rng.normal(size=(5, 5))
            c = rng.uniform(0.1, 50)
            assert condition_number(c * M) == pytest.approx(
                condition_number(M), rel=1e-9)

    def test_rank_deficient_raises(self):
        M = np.ones((4, 4))
        with pytest.raises(SingularInput):
            condition_number(M)

    def test_nonfinite_raises(self):
        M = np.eye(3)
        M[1, 1] = np.nan
        with pytest.raises(SingularInput):
            condition_number(M)

    def test_result_at_least_one(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            assert condition_number(rng.normal(size=(6, 3))) >= 1.0


class TestComplexToReal:
    def test_single_entry(self):
        R = complex_to_real(np.array([[3 + 4j]]))
        assert np.array_equal(R, np.array([[3.0, -4.0], [4.0, 3.0]]))

    def test_shape(self):
        M = np.zeros((3, 5), dtype=complex)
        assert complex_to_real(M).shape == (6, 10)

    def test_multiplicative(self):
        rng = np.random.default_rng(19)
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        lhs = complex_to_real(A @ B)
        rhs = complex_to_real(A) @ complex_to_real(B)
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_additive(self):
        rng = np.random.default_rng(23)
        A = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        B = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        assert np.allclose(complex_to_real(A + B),
                           complex_to_real(A) + complex_to_real(B), atol=1e-12)

    def test_norm_preserved(self):
        rng = np.random.default_rng(29)
        M = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        lhs = np.linalg.norm(complex_to_real(M) @ embed_vector(v))
        assert lhs == pytest.approx(np.linalg.norm(M @ v), rel=1e-10)

    def test_embedding_matches_vector_product(self):
        rng = np.random.default_rng(31)
        M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert np.allclose(complex_to_real(M) @ embed_vector(v),
                           embed_vector(M @ v), atol=1e-12)

    def test_condition_number_preserved(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            assert condition_number(complex_to_real(M)) == pytest.approx(
                np.linalg.cond(M), rel=1e-8)
