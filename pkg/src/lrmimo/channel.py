"""Quasi-static Rayleigh channel, outage evaluation, and the optimal DMT curve."""

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import DomainError, ShapeError
from .numerics import complex_to_real, embed_vector


@dataclass(frozen=True)
class ChannelModel:
    """Channel dimensions and operating SNR (linear)."""
    nt: int
    nr: int
    T: int
    rho: float

    def __post_init__(self):
        if self.rho <= 0:
            raise DomainError("rho must be positive")

    @property
    def beta(self):
        """Receive gain factor rho / nt (per-antenna power split)."""
        return self.rho / self.nt


@dataclass(frozen=True)
class TransmissionInstance:
    """One realization of y = sqrt(beta) H x + w in real coordinates."""
    H: np.ndarray               # complex nr x nt
    x: np.ndarray               # real codeword vector, length 2*nt*T
    w: np.ndarray               # complex noise, length nr*T
    y: np.ndarray               # real received vector, length 2*nr*T
    rate_bits: float = float("nan")


def sample_channel(model, seed):
    """nr x nt i.i.d. CN(0,1) channel draw, deterministic given the seed."""
    key = seed if isinstance(seed, tuple) else (seed,)
    return rng.complex_gaussians(key[0], key[1:] + ("H",), (model.nr, model.nt))


def apply_channel(model, H, x):
    """Noiseless sqrt(beta) * blockdiag(H) applied to a real codeword vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (2 * model.nt * model.T,):
        raise ShapeError(
            f"codeword length {x.shape} does not match 2*nt*T = {2 * model.nt * model.T}")
    if H.shape != (model.nr, model.nt):
        raise ShapeError(f"channel shape {H.shape} != ({model.nr}, {model.nt})")
    Hre = complex_to_real(H)
    xu = x.reshape(model.T, 2 * model.nt)
    return np.sqrt(model.beta) * (xu @ Hre.T).ravel()


def transmit(model, H, x, seed, noise=None):
    """One use of the channel; noise is fresh per call under the seed.

    noise, when given, overrides the drawn complex noise vector (nr*T,);
    its real components are taken as-is (unit variance per real dimension
    when drawn).
    """
    key = seed if isinstance(seed, tuple) else (seed,)
    if noise is None:
        z = rng.gaussians(key[0], key[1:] + ("w",), 2 * model.nr * model.T)
        w = z[0::2] + 1j * z[1::2]
    else:
        w = np.asarray(noise, dtype=np.complex128).ravel()
        if w.shape != (model.nr * model.T,):
            raise ShapeError(f"noise length {w.shape} != nr*T = {model.nr * model.T}")
    y = apply_channel(model, H, x) + embed_vector(w)
    return TransmissionInstance(H=H, x=np.asarray(x, float), w=w, y=y)


def outage_indicator(model, H, R):
    """True iff the per-use mutual information log2 det(I + beta H H') < R."""
    A = np.eye(model.nr) + model.beta * (H @ H.conj().T)
    sign, logdet = np.linalg.slogdet(A)
    return bool(sign <= 0 or logdet / np.log(2.0) < R)


def dmt_optimal_curve(nt, nr, r):
    """Optimal diversity at multiplexing gain r: piecewise-linear through
    the integer points (k, (nt-k)(nr-k))."""
    rmax = min(nt, nr)
    if r < 0 or r > rmax:
        raise DomainError(f"multiplexing gain {r} outside [0, {rmax}]")
    k = int(np.floor(r))
    if k == rmax:
        return 0.0
    d0 = (nt - k) * (nr - k)
    d1 = (nt - k - 1) * (nr - k - 1)
    return float(d0 + (r - k) * (d1 - d0))
