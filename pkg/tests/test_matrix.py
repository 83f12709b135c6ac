"""Tests for sgsvp_matrix.
"""
import numpy as np
import pytest

from sgsvp import sgsvp_matrix
from sgsvp.sgsvp_errors import InputError, ShapeError

import oracles


def test_matvec():
    for A, z, expected in (
        (np.eye(2), [3.0, -1.0], [3.0, -1.0]),
        ([[1.0, 2.0], [3.0, 4.0]], [1.0, 1.0], [3.0, 7.0]),
        ([[1.0, 1.0, 1.0]], [0.0, 0.0, 0.0], [0.0]),
    ):
        result = sgsvp_matrix.matvec(sgsvp_matrix.as_matrix(A), np.array(z))
        assert np.array_equal(result, expected), f"{result} != {expected}"
    with pytest.raises(ShapeError):
        sgsvp_matrix.matvec(np.eye(2), np.ones(3))


def test_matvec_transposed():
    for A, u, expected in (
        (np.eye(2), [5.0, 7.0], [5.0, 7.0]),
        ([[1.0, 2.0], [3.0, 4.0]], [1.0, 0.0], [1.0, 2.0]),
        ([[1.0], [1.0], [1.0]], [1.0, 2.0, 3.0], [6.0]),
    ):
        result = sgsvp_matrix.matvec_transposed(
            sgsvp_matrix.as_matrix(A), np.array(u)
        )
        assert np.array_equal(result, expected), f"{result} != {expected}"
    with pytest.raises(ShapeError):
        sgsvp_matrix.matvec_transposed(np.eye(2), np.ones(3))


def test_adjoint_identity():
    gen = oracles.rng(0)
    for _ in range(50):
        rows, cols = gen.integers(1, 10, size=2)
        A = gen.standard_normal((rows, cols))
        z = gen.standard_normal(cols)
        u = gen.standard_normal(rows)
        lhs = sgsvp_matrix.matvec(A, z) @ u
        rhs = z @ sgsvp_matrix.matvec_transposed(A, u)
        assert np.isclose(lhs, rhs, rtol=1e-12, atol=1e-12), f"{lhs} != {rhs}"


def test_augment_with_ones():
    for C, expected in (
        ([[1.0, 2.0]], [[1.0, 2.0, 1.0]]),
        (np.zeros((2, 2)), [[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]]),
        ([[3.0]], [[3.0, 1.0]]),
    ):
        result = sgsvp_matrix.augment_with_ones(np.array(C))
        assert np.array_equal(result, expected), f"{result} != {expected}"
        assert result.shape[1] == np.array(C).shape[1] + 1
        assert not result.flags.writeable
    with pytest.raises(ShapeError):
        sgsvp_matrix.augment_with_ones(np.zeros((0, 3)))


def test_as_matrix():
    A = sgsvp_matrix.as_matrix([[1, 2], [3, 4]])
    assert A.dtype == np.float64
    assert A.flags.c_contiguous
    assert not A.flags.writeable
    with pytest.raises(ShapeError):
        sgsvp_matrix.as_matrix([1.0, 2.0])
    with pytest.raises(InputError) as excinfo:
        sgsvp_matrix.as_matrix([[1.0, 2.0], [3.0, np.nan]], "X")
    assert "row 1, column 1" in str(excinfo.value), str(excinfo.value)


if __name__ == "__main__":
    test_matvec()
    test_matvec_transposed()
    test_adjoint_identity()
    test_augment_with_ones()
    test_as_matrix()
