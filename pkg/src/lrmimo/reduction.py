"""Flop-instrumented LLL reduction with cycle counting and the cycle bound."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, SingularInput
from .numerics import condition_number, singular_values, RANK_TOL

# Eq-style cycle bound uses base 2/sqrt(3), tied to delta = 3/4
_LOG_BASE = np.log(2.0 / np.sqrt(3.0))
DEFAULT_DELTA = 0.75


@dataclass(frozen=True)
class ReductionResult:
    reduced_basis: np.ndarray
    U: np.ndarray               # unimodular integer transform, reduced = input @ U
    cycles: int                 # Lovasz-failure (swap) count
    flops: int
    halted: bool


def lll_reduce(M, delta=DEFAULT_DELTA, flop_budget=None):
    """delta-LLL-reduce the columns of M, tracking the unimodular transform.

    flop_budget = None runs to completion; otherwise the reduction halts
    once the internal flop count passes the budget, overshooting by at
    most one loop position's work.
    """
    if not (0.25 < delta <= 1.0):
        raise DomainError(f"delta must lie in (1/4, 1], got {delta}")
    M = np.ascontiguousarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < M.shape[1] or M.shape[1] == 0:
        raise SingularInput(f"basis shape {M.shape} cannot have full column rank")
    if not np.all(np.isfinite(M)):
        raise SingularInput("basis contains non-finite entries")
    sv = singular_values(M)
    if sv[-1] <= RANK_TOL * sv[0]:
        raise SingularInput("basis is numerically rank deficient")
    B = M.copy()
    budget = -1 if flop_budget is None else int(flop_budget)
    U, cycles, flops, halted = _kernels.lll_reduce_core(B, float(delta), budget)
    return ReductionResult(B, U, int(cycles), int(flops), bool(halted))


def lll_cycle_bound(M, n=None):
    """Upper bound n^2 log_{2/sqrt3} kappa(M) + n on LLL cycles."""
    M = np.asarray(M, dtype=np.float64)
    if n is None:
        n = M.shape[1]
    kappa = condition_number(M)
    return float(n * n * np.log(kappa) / _LOG_BASE + n)
