"""Compiled numerical kernels with exact flop counters.

Flop convention, applied identically everywhere: one real multiply or
multiply-accumulate, one addition/subtraction, one division, one square
root, and one logarithm each count as 1 flop; comparisons, sign flips,
rounding and copies are free.  Counters are exact integers so identical
inputs always produce identical counts.
"""

import numpy as np
from numba import njit

_JACOBI_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 60
_MU_THRESH = 0.5 + 1e-12  # size-reduction trigger, guards against swap livelock


@njit(cache=True, nogil=True)
def jacobi_singular_values(A):
    """One-sided Jacobi SVD: returns (descending singular values, flops)."""
    W = A.copy()
    m, n = W.shape
    flops = 0
    for _ in range(_JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = 0.0
                aqq = 0.0
                apq = 0.0
                for i in range(m):
                    app += W[i, p] * W[i, p]
                    aqq += W[i, q] * W[i, q]
                    apq += W[i, p] * W[i, q]
                flops += 3 * m
                flops += 3
                if abs(apq) > _JACOBI_TOL * np.sqrt(app * aqq):
                    rotated = True
                    tau = (aqq - app) / (2.0 * apq)
                    if tau >= 0.0:
                        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = c * t
                    flops += 10
                    for i in range(m):
                        wp = W[i, p]
                        wq = W[i, q]
                        W[i, p] = c * wp - s * wq
                        W[i, q] = s * wp + c * wq
                    flops += 4 * m
        if not rotated:
            break
    sv = np.empty(n)
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += W[i, j] * W[i, j]
        sv[j] = np.sqrt(acc)
    flops += n * (m + 1)
    sv[::-1].sort()
    return sv, flops


@njit(cache=True, nogil=True)
def gram_schmidt(B):
    """GSO of the columns of B: returns (Bstar, mu, d, flops)."""
    m, n = B.shape
    Bstar = np.empty((m, n))
    mu = np.zeros((n, n))
    d = np.empty(n)
    flops = 0
    for i in range(n):
        for r in range(m):
            Bstar[r, i] = B[r, i]
        for j in range(i):
            dot = 0.0
            for r in range(m):
                dot += B[r, i] * Bstar[r, j]
            mu[i, j] = dot / d[j]
            for r in range(m):
                Bstar[r, i] -= mu[i, j] * Bstar[r, j]
            flops += 2 * m + 1
        acc = 0.0
        for r in range(m):
            acc += Bstar[r, i] * Bstar[r, i]
        d[i] = acc
        flops += m
    return Bstar, mu, d, flops


@njit(cache=True, nogil=True)
def lll_reduce_core(B, delta, budget):
    """In-place LLL reduction of the columns of B.

    Returns (U, cycles, flops, halted).  A cycle is counted whenever the
    Lovasz test fails and a swap is performed; pass-through positions are
    not cycles.  budget < 0 means unlimited; the budget is checked once
    per loop position so the overshoot is at most one position's work.
    """
    m, n = B.shape
    U = np.eye(n, dtype=np.int64)
    Bstar, mu, d, flops = gram_schmidt(B)
    cycles = 0
    halted = False
    k = 1
    while k < n:
        if budget >= 0 and flops > budget:
            halted = True
            break
        # size-reduce column k against all previous columns
        for j in range(k - 1, -1, -1):
            if abs(mu[k, j]) > _MU_THRESH:
                r = np.rint(mu[k, j])
                for i in range(m):
                    B[i, k] -= r * B[i, j]
                flops += m
                ri = np.int64(r)
                for i in range(n):
                    U[i, k] -= ri * U[i, j]
                flops += n
                for l in range(j):
                    mu[k, l] -= r * mu[j, l]
                mu[k, j] -= r
                flops += j + 1
        # Lovasz condition with parameter delta
        nu = mu[k, k - 1]
        flops += 2
        if d[k] >= (delta - nu * nu) * d[k - 1]:
            k += 1
        else:
            cycles += 1
            for i in range(m):
                tmp = B[i, k - 1]
                B[i, k - 1] = B[i, k]
                B[i, k] = tmp
            for i in range(n):
                ti = U[i, k - 1]
                U[i, k - 1] = U[i, k]
                U[i, k] = ti
            # incremental GSO update for the swap
            dnew = d[k] + nu * nu * d[k - 1]
            mu[k, k - 1] = nu * d[k - 1] / dnew
            d[k] = d[k - 1] * d[k] / dnew
            d[k - 1] = dnew
            flops += 8
            for j in range(k - 1):
                t = mu[k - 1, j]
                mu[k - 1, j] = mu[k, j]
                mu[k, j] = t
            for i in range(k + 1, n):
                t = mu[i, k]
                mu[i, k] = mu[i, k - 1] - nu * t
                mu[i, k - 1] = t + mu[k, k - 1] * mu[i, k]
                flops += 4
            k = max(k - 1, 1)
    return U, cycles, flops, halted


@njit(cache=True, nogil=True)
def babai_round(Bstar, mu, d, t):
    """Unconstrained LS solve in the given basis followed by rounding.

    Returns (v, flops) with v the rounded integer coefficients of the
    basis whose GSO is (Bstar, mu, d).
    """
    m, n = Bstar.shape
    c = np.empty(n)
    flops = 0
    for i in range(n):
        dot = 0.0
        for r in range(m):
            dot += t[r] * Bstar[r, i]
        c[i] = dot / d[i]
        flops += m + 1
    v = np.empty(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        acc = c[i]
        for j in range(i + 1, n):
            acc -= mu[j, i] * c[j]
            flops += 1
        c[i] = acc
        v[i] = np.int64(np.rint(acc))
    return v, flops


@njit(cache=True, nogil=True)
def decode_lattice_trial(Hre, y, G2, Lvec, sqrt_beta, alpha, delta,
                         use_lll, kappa_threshold, budget):
    """One regularized lattice decode (with or without the LLL step).

    Hre is the 2nr x 2nt real embedding of the channel, y the received
    real vector over all channel uses, G2 the scaled real code generator
    and Lvec the per-component offset range.  kappa_threshold < 0 disables
    the condition-number check; budget < 0 leaves the reduction unlimited.

    Returns (uhat, flops, kappa, cycles, halted); uhat holds the clipped
    symbol offsets (all zero when halted).
    """
    mr = Hre.shape[0]          # 2*nr
    nc = Hre.shape[1]          # 2*nt
    n, ns = G2.shape           # n = 2*nt*T
    T = n // nc
    m = mr * T
    flops = 0

    # components with a single level carry no information and are not part
    # of the code lattice; the search runs over the active columns only
    na = 0
    for j in range(ns):
        if Lvec[j] > 1:
            na += 1
    act = np.empty(na, dtype=np.int64)
    w = 0
    for j in range(ns):
        if Lvec[j] > 1:
            act[w] = j
            w += 1

    # effective channel-code map F = sqrt_beta * blockdiag(Hre) @ G2[:, active]
    Hs = np.empty((mr, nc))
    for i in range(mr):
        for j in range(nc):
            Hs[i, j] = sqrt_beta * Hre[i, j]
    flops += mr * nc
    F = np.empty((m, na))
    for u in range(T):
        for i in range(mr):
            for j in range(na):
                acc = 0.0
                for l in range(nc):
                    acc += Hs[i, l] * G2[u * nc + l, act[j]]
                F[u * mr + i, j] = acc
    flops += T * mr * nc * na

    # augmented basis (2x the regularized generator) and target
    sa = np.sqrt(alpha)
    flops += 1
    Bb = np.zeros((m + na, na))
    for i in range(m):
        for j in range(na):
            Bb[i, j] = 2.0 * F[i, j]
    flops += m * na
    for j in range(na):
        Bb[m + j, j] = 2.0 * sa
    flops += na
    tvec = np.empty(m + na)
    for i in range(m):
        acc = y[i]
        for j in range(na):
            acc += F[i, j] * (Lvec[act[j]] - 1)
        tvec[i] = acc
    flops += m * na
    for j in range(na):
        tvec[m + j] = sa * (Lvec[act[j]] - 1)
    flops += na

    uhat = np.zeros(ns, dtype=np.int64)
    kappa = -1.0
    if kappa_threshold >= 0.0:
        sv, jf = jacobi_singular_values(Bb)
        flops += jf + 1
        kappa = sv[0] / sv[na - 1]
        if kappa > kappa_threshold:
            return uhat, flops, kappa, 0, True

    cycles = 0
    halted = False
    if use_lll:
        U, cycles, lf, halted = lll_reduce_core(Bb, delta, budget)
        flops += lf
        if halted:
            return uhat, flops, kappa, cycles, True

    Bstar, mu, d, gf = gram_schmidt(Bb)
    flops += gf
    v, bf = babai_round(Bstar, mu, d, tvec)
    flops += bf

    if use_lll:
        for i in range(na):
            acc = np.int64(0)
            for j in range(na):
                acc += U[i, j] * v[j]
            uhat[act[i]] = acc
        flops += na * na
    else:
        for i in range(na):
            uhat[act[i]] = v[i]

    for j in range(ns):
        if uhat[j] < 0:
            uhat[j] = 0
        elif uhat[j] > Lvec[j] - 1:
            uhat[j] = Lvec[j] - 1
    return uhat, flops, kappa, cycles, False


@njit(cache=True, nogil=True)
def ml_search(F, y, S):
    """Exhaustive metric search: argmin_i ||y - F @ S[i]||^2, lowest index wins."""
    ncw = S.shape[0]
    m, ns = F.shape
    best = np.inf
    arg = 0
    for i in range(ncw):
        dist = 0.0
        for r in range(m):
            acc = y[r]
            for j in range(ns):
                acc -= F[r, j] * S[i, j]
            dist += acc * acc
        if dist < best:
            best = dist
            arg = i
    return arg


@njit(cache=True, nogil=True)
def run_chunk_lattice(Hre_all, y_all, utrue_all, G2, Lvec, sqrt_beta, alpha,
                      delta, use_lll, kappa_threshold, budget,
                      ok_out, flops_out, kappa_out, cycles_out, halted_out):
    """Lattice-decode every trial of a chunk, filling the output arrays."""
    ntr = Hre_all.shape[0]
    ns = G2.shape[1]
    for t in range(ntr):
        uhat, fl, ka, cy, ha = decode_lattice_trial(
            Hre_all[t], y_all[t], G2, Lvec, sqrt_beta, alpha,
            delta, use_lll, kappa_threshold, budget)
        ok = not ha
        if ok:
            for j in range(ns):
                if uhat[j] != utrue_all[t, j]:
                    ok = False
                    break
        ok_out[t] = ok
        flops_out[t] = fl
        kappa_out[t] = ka
        cycles_out[t] = cy
        halted_out[t] = ha


@njit(cache=True, nogil=True)
def run_chunk_ml(Hre_all, y_all, idx_true, G2, S, sqrt_beta, flops_per_trial,
                 ok_out, flops_out):
    """ML-decode every trial of a chunk against the enumerated symbol rows S."""
    ntr = Hre_all.shape[0]
    mr = Hre_all.shape[1]
    nc = Hre_all.shape[2]
    n, ns = G2.shape
    T = n // nc
    m = mr * T
    F = np.empty((m, ns))
    Hs = np.empty((mr, nc))
    for t in range(ntr):
        for i in range(mr):
            for j in range(nc):
                Hs[i, j] = sqrt_beta * Hre_all[t, i, j]
        for u in range(T):
            for i in range(mr):
                for j in range(ns):
                    acc = 0.0
                    for l in range(nc):
                        acc += Hs[i, l] * G2[u * nc + l, j]
                    F[u * mr + i, j] = acc
        arg = ml_search(F, y_all[t], S)
        ok_out[t] = arg == idx_true[t]
        flops_out[t] = flops_per_trial
