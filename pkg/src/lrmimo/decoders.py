"""The three flop-instrumented decoders: exhaustive ML, LR-aided regularized
linear, and the un-reduced linear-rounding baseline.

All three operate on the real received vector produced by
channel.transmit.  Flop counts follow the package-wide convention in
_kernels and are deterministic functions of the inputs.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ShapeError
from .numerics import complex_to_real
from .reduction import DEFAULT_DELTA

# exhaustive search switches from the compiled loop to chunked BLAS here
ML_DIRECT_LIMIT = 2 ** 14
_ML_CHUNK = 2 ** 17


@dataclass(frozen=True)
class RegularizedSystem:
    """Augmented least-squares system whose integer minimizer matches the
    regularized decoding metric.

    Columns cover the active symbol components only (single-level
    components are not part of the code lattice)."""
    M_aug: np.ndarray           # (m + na) x na, always full column rank
    y_aug: np.ndarray           # received vector extended with zeros
    T_reg: np.ndarray           # positive-definite penalty on codeword space
    alpha: float                # penalty level nt / rho in symbol space
    F: np.ndarray               # effective channel-code map, m x na


@dataclass(frozen=True)
class DecodeOutcome:
    status: str                 # 'decoded' or 'halted'
    decision: Optional[np.ndarray]   # codeword vector, present iff decoded
    flops: int
    offsets: Optional[np.ndarray] = None  # clipped symbol offsets of the decision
    kappa: Optional[float] = None
    lll_cycles: Optional[int] = None


def effective_map(H, code, model, active_only=False):
    """F = sqrt(beta) * blockdiag(embed(H)) @ (scale * G)."""
    if H.shape != (model.nr, model.nt):
        raise ShapeError(f"channel shape {H.shape} != ({model.nr}, {model.nt})")
    if code.nt != model.nt or code.T != model.T:
        raise ShapeError("code dimensions do not match the channel model")
    Hre = complex_to_real(H)
    G2 = code.scale * code.G
    if active_only:
        G2 = G2[:, code.Lvec > 1]
    m = 2 * model.nr * model.T
    F = np.empty((m, G2.shape[1]))
    blk = 2 * model.nr
    for u in range(model.T):
        F[u * blk:(u + 1) * blk] = Hre @ G2[u * 2 * model.nt:(u + 1) * 2 * model.nt]
    return np.sqrt(model.beta) * F


def regularize(H, code, model, y):
    """MMSE-like preprocessing of the decoding metric.

    Builds M_aug, y_aug with ||y_aug - M_aug s||^2 equal to
    ||y - sqrt(beta) H x(s)||^2 + ||x(s)||^2_T for every integer symbol
    vector s over the active components (additive constant zero), where
    the penalty is alpha ||s||^2 with alpha = nt / rho.
    """
    y = np.asarray(y, dtype=np.float64)
    m = 2 * model.nr * model.T
    if y.shape != (m,):
        raise ShapeError(f"received vector length {y.shape} != {m}")
    F = effective_map(H, code, model, active_only=True)
    na = F.shape[1]
    alpha = model.nt / model.rho
    M_aug = np.vstack([F, np.sqrt(alpha) * np.eye(na)])
    y_aug = np.concatenate([y, np.zeros(na)])
    Ginv = np.linalg.inv(code.scale * code.G)
    T_reg = alpha * (Ginv.T @ Ginv)
    return RegularizedSystem(M_aug, y_aug, T_reg, alpha, F)


def ml_flops(code, model):
    """Canonical full-search cost: |X| metric evaluations of m*n + 2m flops."""
    m = 2 * model.nr * model.T
    return code.size * (m * code.n + 2 * m)


def _ml_argmin_big(F, y, code):
    """Chunked exhaustive argmin for codebooks too large for the direct loop."""
    best = np.inf
    arg = -1
    for a in range(0, code.size, _ML_CHUNK):
        b = min(a + _ML_CHUNK, code.size)
        U = code.offsets_matrix(a, b)
        S = 2.0 * U - (code.Lvec - 1)
        D = F @ S.T
        D -= y[:, None]
        np.square(D, out=D)
        dist = D.sum(axis=0)
        i = int(np.argmin(dist))
        if dist[i] < best:
            best = float(dist[i])
            arg = a + i
    return arg


def ml_decode(y, H, code, model):
    """Exhaustive maximum-likelihood search over the whole codebook.

    Ties break to the lowest codeword index; the flop count is the
    canonical per-codeword metric cost times |X|.
    """
    y = np.asarray(y, dtype=np.float64)
    F = effective_map(H, code, model)
    if code.size <= ML_DIRECT_LIMIT:
        U = code.offsets_matrix(0, code.size)
        S = (2.0 * U - (code.Lvec - 1)).astype(np.float64)
        arg = int(_kernels.ml_search(F, y, S))
    else:
        arg = _ml_argmin_big(F, y, code)
    u = code.symbol_offsets(arg)
    return DecodeOutcome(status="decoded", decision=code.vector_from_offsets(u),
                         flops=ml_flops(code, model), offsets=u)


def _lattice_outcome(y, H, code, model, use_lll, kappa_threshold, budget,
                     delta, extra_flops=0):
    y = np.ascontiguousarray(y, dtype=np.float64)
    m = 2 * model.nr * model.T
    if y.shape != (m,):
        raise ShapeError(f"received vector length {y.shape} != {m}")
    if H.shape != (model.nr, model.nt):
        raise ShapeError(f"channel shape {H.shape} != ({model.nr}, {model.nt})")
    Hre = np.ascontiguousarray(complex_to_real(H))
    G2 = np.ascontiguousarray(code.scale * code.G)
    uhat, flops, kappa, cycles, halted = _kernels.decode_lattice_trial(
        Hre, y, G2, code.Lvec, np.sqrt(model.beta), model.nt / model.rho,
        delta, use_lll, kappa_threshold, budget)
    flops = int(flops) + int(extra_flops)
    kap = float(kappa) if kappa >= 0 else None
    if halted:
        return DecodeOutcome(status="halted", decision=None, flops=flops,
                             kappa=kap, lll_cycles=int(cycles) if use_lll else None)
    return DecodeOutcome(status="decoded", decision=code.vector_from_offsets(uhat),
                         flops=flops, offsets=uhat, kappa=kap,
                         lll_cycles=int(cycles) if use_lll else None)


def lrr_decode(y, H, code, model, decision, delta=DEFAULT_DELTA):
    """LR-aided regularized linear decode under a policy decision.

    Pipeline: regularize, LLL-reduce the augmented generator, solve the
    least-squares system in the reduced basis, round componentwise, map
    back through the unimodular transform, clip to the constellation.
    """
    if not decision.admit:
        kap = decision.kappa
        # admission required computing kappa on the regularized generator
        flops = decision.admit_flops
        return DecodeOutcome(status="halted", decision=None, flops=max(int(flops), 1),
                             kappa=kap, lll_cycles=0)
    threshold = -1.0 if decision.kappa_threshold is None else float(decision.kappa_threshold)
    budget = -1 if decision.flop_budget is None else int(decision.flop_budget)
    return _lattice_outcome(y, H, code, model, True, threshold, budget, delta,
                            extra_flops=decision.extra_flops)


def linear_decode(y, H, code, model, delta=DEFAULT_DELTA):
    """Identical pipeline minus the reduction step (U = identity)."""
    return _lattice_outcome(y, H, code, model, False, -1.0, -1, delta)
