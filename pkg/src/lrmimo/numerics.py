"""Dense matrix helpers: condition numbers and the complex-to-real embedding.

Matrices are plain numpy arrays; columns are treated as basis vectors
throughout the package.
"""

import numpy as np

from . import _kernels
from .errors import SingularInput

# singular values below this fraction of the largest are rank deficiency
RANK_TOL = 1e-12


def singular_values(M):
    """Descending singular values via one-sided Jacobi rotations."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or min(M.shape) == 0:
        raise SingularInput("expected a nonempty 2-d matrix")
    if not np.all(np.isfinite(M)):
        raise SingularInput("matrix contains non-finite entries")
    A = M if M.shape[0] >= M.shape[1] else M.T
    sv, _ = _kernels.jacobi_singular_values(np.ascontiguousarray(A))
    return sv


def condition_number(M):
    """2-norm condition number sigma_max / sigma_min of a full-column-rank matrix."""
    sv = singular_values(M)
    if sv[-1] <= RANK_TOL * sv[0]:
        raise SingularInput("matrix is numerically rank deficient")
    return float(sv[0] / sv[-1])


def complex_to_real(M):
    """Embed a complex matrix into reals, entry a+bi -> [[a, -b], [b, a]].

    The output is 2m x 2n; complex vectors embed as interleaved
    (re, im, re, im, ...) so that products are preserved.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim == 1:
        M = M[:, None]
        out = complex_to_real(M)
        return out[:, 0]
    m, n = M.shape
    R = np.empty((2 * m, 2 * n))
    R[0::2, 0::2] = M.real
    R[0::2, 1::2] = -M.imag
    R[1::2, 0::2] = M.imag
    R[1::2, 1::2] = M.real
    return R


def embed_vector(v):
    """Interleaved real embedding (re, im, ...) of a complex vector."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out
