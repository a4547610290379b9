"""Decoding policies: unrestricted, condition-number halting, flop budgets,
and synthetic degradation used to trace the achievable region."""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .channel import dmt_optimal_curve
from .errors import DomainError, PolicyKindError

KINDS = ("unrestricted", "lr_halting", "flop_budget", "degrade")


@dataclass(frozen=True)
class Policy:
    kind: str
    epsilon: float = 0.5                      # lr_halting threshold exponent margin
    d_ml_curve: Optional[Callable[[float], float]] = None
    target_d: float = 0.0                     # degrade: forced error exponent
    target_c: float = 0.0                     # degrade: busy-work exponent
    budget_exponent: float = 0.0              # flop_budget: budget = rho**exponent

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown policy kind '{self.kind}'")
        if self.kind == "lr_halting" and self.epsilon <= 0:
            raise DomainError("epsilon must be positive")
        if self.target_d < 0 or self.target_c < 0:
            raise DomainError("degrade targets must be nonnegative")


@dataclass(frozen=True)
class PolicyDecision:
    """Per-instance verdict handed to the decoder."""
    admit: bool
    flop_budget: Optional[int] = None         # None = unlimited
    extra_flops: int = 0                      # degrade busy-work
    force_error_prob: float = 0.0             # degrade forced-flip probability
    kappa: Optional[float] = None             # condition number, when computed
    kappa_threshold: Optional[float] = None
    admit_flops: int = 0                      # cost of reaching the verdict


def unrestricted_policy():
    return Policy(kind="unrestricted")


def lr_halting_policy(nt, nr, epsilon=0.5):
    """Halting policy with the optimal-DMT reference curve for an nt x nr link."""
    return Policy(kind="lr_halting", epsilon=epsilon,
                  d_ml_curve=lambda r: dmt_optimal_curve(nt, nr, r))


def lr_threshold(rho, r, policy):
    """Admission threshold rho ** ((d_ml(r) + 1)/2 + epsilon)."""
    if policy.kind != "lr_halting":
        raise PolicyKindError(f"lr_threshold needs an lr_halting policy, got '{policy.kind}'")
    if policy.d_ml_curve is None:
        raise DomainError("lr_halting policy has no reference DMT curve")
    d_ml = policy.d_ml_curve(r)
    return float(rho ** (0.5 * (d_ml + 1.0) + policy.epsilon))


def admit(policy, M_aug, rho, r, seed=None):
    """Decide whether and how the decoder may run on this instance.

    seed is accepted for interface stability; no current policy draws
    randomness at admission time (degrade flips are drawn per trial by
    the caller from force_error_prob).
    """
    if policy.kind == "unrestricted":
        return PolicyDecision(admit=True)
    if policy.kind == "lr_halting":
        threshold = lr_threshold(rho, r, policy)
        sv, jf = _kernels.jacobi_singular_values(
            np.ascontiguousarray(M_aug, dtype=np.float64))
        kappa = float(sv[0] / sv[-1])
        return PolicyDecision(admit=kappa <= threshold, kappa=kappa,
                              kappa_threshold=threshold, admit_flops=int(jf) + 1)
    if policy.kind == "flop_budget":
        return PolicyDecision(admit=True, flop_budget=int(math.floor(rho ** policy.budget_exponent)))
    # degrade: run, then add busy-work and flip with the forced probability
    return PolicyDecision(admit=True,
                          extra_flops=int(math.ceil(rho ** policy.target_c)),
                          force_error_prob=float(rho ** (-policy.target_d)))
