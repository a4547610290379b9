"""Independent verification helpers used by unit and acceptance tests.

Everything here is deliberately written against the contract, not the
implementation: fresh Gram-Schmidt, exact integer arithmetic for
unimodularity, and brute-force metric searches.
"""

from fractions import Fraction

import numpy as np


def gso_from_scratch(B):
    """Plain-numpy Gram-Schmidt of the columns of B."""
    m, n = B.shape
    Bs = np.zeros((m, n))
    mu = np.zeros((n, n))
    d = np.zeros(n)
    for i in range(n):
        Bs[:, i] = B[:, i]
        for j in range(i):
            mu[i, j] = B[:, i] @ Bs[:, j] / d[j]
            Bs[:, i] -= mu[i, j] * Bs[:, j]
        d[i] = Bs[:, i] @ Bs[:, i]
    return Bs, mu, d


def is_reduced(B, delta=0.75, tol=5e-9):
    """Size-reduction and Lovasz conditions re-verified from scratch."""
    _, mu, d = gso_from_scratch(np.asarray(B, dtype=np.float64))
    n = mu.shape[0]
    for i in range(n):
        for j in range(i):
            if abs(mu[i, j]) > 0.5 + tol:
                return False
    for k in range(1, n):
        if d[k] < (delta - mu[k, k - 1] ** 2) * d[k - 1] - tol * d[k - 1]:
            return False
    return True


def exact_det(M):
    """Exact determinant of an integer matrix via Fraction elimination."""
    A = [[Fraction(int(v)) for v in row] for row in np.asarray(M)]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if A[r][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            det = -det
        det *= A[c][c]
        inv = Fraction(1) / A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if f:
                for cc in range(c, n):
                    A[r][cc] -= f * A[c][cc]
    assert det.denominator == 1
    return int(det)


def exact_integer_inverse(U):
    """Exact inverse of a unimodular integer matrix, as an integer array."""
    U = np.asarray(U)
    n = U.shape[0]
    A = [[Fraction(int(v)) for v in row] for row in U]
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        pivot = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[pivot] = A[pivot], A[c]
        I[c], I[pivot] = I[pivot], I[c]
        inv = Fraction(1) / A[c][c]
        A[c] = [v * inv for v in A[c]]
        I[c] = [v * inv for v in I[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
                I[r] = [a - f * b for a, b in zip(I[r], I[c])]
    out = np.array([[int(v) for v in row] for row in I], dtype=np.int64)
    for row in I:
        assert all(v.denominator == 1 for v in row)
    return out


def ml_bruteforce(y, H, code, model):
    """Independent exhaustive ML metric: enumerate, apply channel, argmin."""
    from lrmimo.channel import apply_channel
    from lrmimo.codes import enumerate_codebook

    X = enumerate_codebook(code, cap=code.size)
    dists = np.array([np.sum((y - apply_channel(model, H, x)) ** 2) for x in X])
    return int(np.argmin(dists))


def regularized_bruteforce(sysr, code):
    """Exhaustive search of the regularized metric over the whole codebook.

    Works on the active-component system produced by regularize(); returns
    the codeword index minimizing ||y_aug - M_aug s_active||^2.
    """
    act = code.Lvec > 1
    best, arg = np.inf, -1
    for i in range(code.size):
        u = code.symbol_offsets(i)
        s = (2.0 * u - (code.Lvec - 1))[act]
        v = float(np.sum((sysr.y_aug - sysr.M_aug @ s) ** 2))
        if v < best:
            best, arg = v, i
    return arg
