"""Dense matrix storage and the few kernels the solver needs.

A DenseMatrix is a read-only, C-ordered (row-major) 2-D float64 numpy array;
a RealVector is a 1-D float64 numpy array. Nothing here forms A^T A: the
solver only ever applies A and then A^T to the resulting residual.
"""

import numpy as np

from .sgsvp_errors import InputError, ShapeError

DenseMatrix = np.ndarray
RealVector = np.ndarray


def as_matrix(data, name: str = "matrix") -> DenseMatrix:
    """Validates `data` and returns it as a read-only DenseMatrix.

    Raises:
        ShapeError if `data` is not 2-dimensional or is empty.
        InputError if any entry is NaN or infinite.
    """
    out = np.array(data, dtype=np.float64, order="C", copy=True)
    if out.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {out.shape}")
    if out.size == 0:
        raise ShapeError(f"{name} is empty (shape {out.shape})")
    if not np.all(np.isfinite(out)):
        row, col = np.argwhere(~np.isfinite(out))[0]
        raise InputError(
            f"{name} has a non-finite entry at row {row}, column {col}"
        )
    out.setflags(write=False)
    return out


def as_vector(data, name: str = "vector") -> RealVector:
    out = np.array(data, dtype=np.float64, copy=True).reshape(-1)
    if out.size == 0:
        raise ShapeError(f"{name} is empty")
    return out


def _check(ok: bool, msg: str):
    if not ok:
        raise ShapeError(msg)


def matvec(A: DenseMatrix, z: RealVector) -> RealVector:
    """Returns A z."""
    _check(
        A.ndim == 2 and z.ndim == 1 and A.shape[1] == z.shape[0],
        f"matvec: cannot apply a {A.shape} matrix to a vector of length "
        f"{z.shape[0] if z.ndim else 0}",
    )
    return A @ z


def matvec_transposed(A: DenseMatrix, u: RealVector) -> RealVector:
    """Returns A^T u (without materializing A^T)."""
    _check(
        A.ndim == 2 and u.ndim == 1 and A.shape[0] == u.shape[0],
        f"matvec_transposed: cannot apply the transpose of a {A.shape} "
        f"matrix to a vector of length {u.shape[0] if u.ndim else 0}",
    )
    return u @ A


def augment_with_ones(C: DenseMatrix) -> DenseMatrix:
    """Returns [C e], C with an extra column of ones (for the bias)."""
    C = np.asarray(C, dtype=np.float64)
    _check(C.ndim == 2 and C.size > 0, f"cannot augment a {C.shape} matrix")
    out = np.hstack((C, np.ones((C.shape[0], 1))))
    out.setflags(write=False)
    return out
