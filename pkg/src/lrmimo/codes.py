"""Lattice space-time codes: a fixed 2x2 CDA-family design and uncoded QAM.

A code family fixes the generator; binding it to a constellation order q
yields a usable code whose scale enforces unit average codeword energy
per channel use.  Symbol components are integers u_j in [0, L_j) mapped
to centered odd-grid values s_j = 2*u_j - (L_j - 1); codeword vectors are
x = scale * G @ s.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import CodebookTooLarge, InvalidSymbol, MinimumRate, DomainError
from .numerics import complex_to_real

DEFAULT_ENUM_CAP = 2 ** 20
_EXACT_SCALE_LIMIT = 2 ** 16  # enumerate the codebook for the scale up to here


@dataclass(frozen=True)
class Constellation:
    """q-ary complex alphabet on a centered rectangular odd-integer grid."""
    order: int
    re_levels: int
    im_levels: int
    points: np.ndarray          # unit-average-energy, enumeration order
    bits_per_symbol: float
    grid_energy: float          # mean |.|^2 of the raw grid


def make_constellation(q):
    """Constellation of order q (a power of 2); square grid for even log2 q."""
    k = int(np.log2(q))
    if q < 2 or 2 ** k != q:
        raise DomainError(f"constellation order must be a power of 2, got {q}")
    lre = 2 ** ((k + 1) // 2)
    lim = 2 ** (k // 2)
    re = 2 * np.arange(lre) - (lre - 1)
    im = 2 * np.arange(lim) - (lim - 1)
    pts = (re[:, None] + 1j * im[None, :]).ravel()  # re-major enumeration order
    energy = float(np.mean(np.abs(pts) ** 2))
    return Constellation(q, lre, lim, pts / np.sqrt(energy), float(k), energy)


def _golden_complex_generator():
    """4x4 complex generator of the Golden-code 2x2 CDA design.

    Maps QAM symbols (a, b, c, d) to the column-wise vectorization of the
    codeword matrix (1/sqrt5) [[alpha(a+b*th), alpha(c+d*th)],
                               [i*albar(c+d*thb), albar(a+b*thb)]].
    """
    s5 = np.sqrt(5.0)
    th = (1 + s5) / 2
    thb = 1 - th
    al = 1 + 1j * (1 - th)
    ab = 1 + 1j * (1 - thb)
    Gc = np.array([
        [al,            al * th,        0,              0],
        [0,             0,              1j * ab,        1j * ab * thb],
        [0,             0,              al,             al * th],
        [ab,            ab * thb,       0,              0],
    ]) / s5
    return Gc


@dataclass(frozen=True)
class LatticeCode:
    """A code family bound to a constellation order, ready to encode."""
    name: str
    G: np.ndarray               # real generator, n x ns, full column rank
    n: int                      # real codeword dimension, 2*nt*T
    ns: int                     # integer symbol components (= n here)
    nsym: int                   # complex symbols per codeword
    T: int
    nt: int
    q: int
    constellation: Constellation
    scale: float
    Lvec: np.ndarray            # per-component level counts, shape (ns,)
    size: int                   # |X| = q ** nsym
    rate_bits: float            # (1/T) log2 |X|

    def symbol_offsets(self, index):
        """Mixed-radix digits u of a codeword index (component 0 most significant)."""
        if index < 0 or index >= self.size:
            raise InvalidSymbol(f"codeword index {index} outside [0, {self.size})")
        u = np.empty(self.ns, dtype=np.int64)
        rem = int(index)
        for j in range(self.ns - 1, -1, -1):
            L = int(self.Lvec[j])
            u[j] = rem % L
            rem //= L
        return u

    def vector_from_offsets(self, u):
        """Codeword x = scale * G @ (2u - (L-1))."""
        s = 2.0 * np.asarray(u, dtype=np.float64) - (self.Lvec - 1)
        return self.scale * (self.G @ s)

    def offsets_matrix(self, start, stop):
        """Rows of symbol offsets for codeword indices [start, stop), vectorized."""
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.empty((idx.size, self.ns), dtype=np.int64)
        rem = idx.copy()
        for j in range(self.ns - 1, -1, -1):
            L = int(self.Lvec[j])
            out[:, j] = rem % L
            rem //= L
        return out


def _component_levels(nsym, cst):
    L = np.empty(2 * nsym, dtype=np.int64)
    L[0::2] = cst.re_levels
    L[1::2] = cst.im_levels
    return L


def _scale_for(G, Lvec, T, size):
    """Scale enforcing mean ||x||^2 = T; exact enumeration when affordable."""
    if size <= _EXACT_SCALE_LIMIT:
        # average over the full codebook
        total = 0.0
        u = np.zeros(len(Lvec), dtype=np.int64)
        for _ in range(size):
            s = 2.0 * u - (Lvec - 1)
            total += float(np.sum((G @ s) ** 2))
            for j in range(len(Lvec) - 1, -1, -1):
                u[j] += 1
                if u[j] < Lvec[j]:
                    break
                u[j] = 0
        mean = total / size
    else:
        # second moment of independent centered PAM components
        var = (Lvec.astype(np.float64) ** 2 - 1.0) / 3.0
        mean = float(np.sum(var * np.sum(G ** 2, axis=0)))
    return np.sqrt(T / mean)


def make_code(name, q, nt=None, T=None):
    """Bind a code family to constellation order q."""
    cst = make_constellation(q)
    if name == "cda2x2":
        nt, T = 2, 2
        G = complex_to_real(_golden_complex_generator())
        nsym = 4
    elif name == "uncoded_qam":
        nt = 1 if nt is None else int(nt)
        T = 1 if T is None else int(T)
        nsym = nt * T
        G = np.eye(2 * nsym)
    else:
        raise DomainError(f"unknown code family '{name}'")
    n = 2 * nt * T
    Lvec = _component_levels(nsym, cst)
    size = int(q) ** nsym
    scale = _scale_for(G, Lvec, T, size)
    rate = nsym * np.log2(q) / T
    return LatticeCode(name, G, n, 2 * nsym, nsym, T, nt, int(q), cst,
                       float(scale), Lvec, size, float(rate))


@dataclass(frozen=True)
class RateSchedule:
    """Rate policy over the SNR grid."""
    mode: str                   # 'scaling' or 'fixed_rate'
    r: float = 0.0              # multiplexing gain (scaling mode)
    fixed_rate: float = 0.0     # bits per channel use (fixed mode)

    @property
    def policy_multiplexing_gain(self):
        """Multiplexing gain seen by SNR-dependent policies (0 for fixed rate)."""
        return self.r if self.mode == "scaling" else 0.0


def schedule_rate(schedule, family, nt, T, nsym, rho):
    """Resolve (R, q) for one SNR point.

    Scaling mode picks the largest power-of-2 order whose code rate does
    not exceed r*log2(rho); fixed mode requires the requested rate to be
    exactly realizable.
    """
    floor_rate = nsym / T  # bits/cu at q = 2
    if schedule.mode == "scaling":
        if rho <= 1:
            raise DomainError("scaling mode needs rho > 1")
        target = schedule.r * np.log2(rho)
        k = int(np.floor(target * T / nsym + 1e-12))
        if k < 1:
            raise MinimumRate(
                f"target rate {target:.3f} b/cu below the minimum realizable "
                f"rate {floor_rate:.3f} b/cu")
        q = 2 ** k
    else:
        k_exact = schedule.fixed_rate * T / nsym
        k = int(round(k_exact))
        if k < 1:
            raise MinimumRate(
                f"fixed rate {schedule.fixed_rate:.3f} b/cu below the minimum "
                f"realizable rate {floor_rate:.3f} b/cu")
        if abs(k_exact - k) > 1e-9:
            raise DomainError(
                f"fixed rate {schedule.fixed_rate} b/cu is not realizable by a "
                f"power-of-2 constellation (needs {nsym}/T * integer)")
        q = 2 ** k
    R = nsym * k / T
    return float(R), int(q)


def encode(code, symbols):
    """Map per-symbol constellation indices to the codeword vector."""
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.shape != (code.nsym,):
        raise InvalidSymbol(
            f"expected {code.nsym} symbol indices, got shape {symbols.shape}")
    if np.any(symbols < 0) or np.any(symbols >= code.q):
        raise InvalidSymbol(f"symbol index outside [0, {code.q})")
    lim = code.constellation.im_levels
    u = np.empty(code.ns, dtype=np.int64)
    u[0::2] = symbols // lim
    u[1::2] = symbols % lim
    return code.vector_from_offsets(u)


def enumerate_codebook(code, cap=DEFAULT_ENUM_CAP):
    """All |X| codeword vectors in enumeration order."""
    if code.size > cap:
        raise CodebookTooLarge(
            f"|X| = {code.size} exceeds the enumeration cap {cap}")
    U = code.offsets_matrix(0, code.size)
    S = 2.0 * U - (code.Lvec - 1)
    return code.scale * (S @ code.G.T)
