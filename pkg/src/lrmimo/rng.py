"""Deterministic random streams.

All randomness is drawn from counter-based Philox streams keyed by
(master_seed, *subkeys) and converted to Gaussians with the Box-Muller
transform.  A draw is therefore a pure function of its key and position,
independent of execution order, which is what makes concurrent trial
execution bit-reproducible.
"""

import numpy as np

# Trials are grouped into fixed-size chunks; the stream key includes the
# chunk index so any scheduling of chunks over workers reads identical bits.
CHUNK = 4096

_TINY = 1e-300


def philox(master_seed, *subkeys):
    """Generator over a Philox stream keyed by (master_seed, *subkeys).

    Subkeys may be integers or short string tags; both fold into the
    128-bit Philox key by a fixed FNV-style mix.
    """
    key = np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF)
    sub = 0
    for k in subkeys:
        if isinstance(k, str):
            for b in k.encode("utf-8"):
                sub = (sub * 0x100000001B3 + b + 1) & 0xFFFFFFFFFFFFFFFF
        else:
            sub = (sub * 0x100000001B3 + int(k) + 1) & 0xFFFFFFFFFFFFFFFF
    bitgen = np.random.Philox(key=np.array([key, np.uint64(sub)], dtype=np.uint64))
    return np.random.Generator(bitgen)


def box_muller(u1, u2):
    """Standard normals from uniform pairs; shapes must match."""
    r = np.sqrt(-2.0 * np.log(np.maximum(u1, _TINY)))
    ang = 2.0 * np.pi * u2
    return r * np.cos(ang), r * np.sin(ang)


def chunk_uniforms(master_seed, point, chunk, n_trials, n_draws):
    """(n_trials, n_draws) uniforms for one chunk of one SNR point."""
    g = philox(master_seed, point, chunk)
    return g.random((n_trials, n_draws))


def gaussians(master_seed, subkeys, n):
    """n standard normals from the stream (master_seed, *subkeys) via Box-Muller."""
    g = philox(master_seed, *subkeys)
    m = (n + 1) // 2
    u = g.random((2, m))
    z0, z1 = box_muller(u[0], u[1])
    return np.concatenate([z0, z1])[:n]


def complex_gaussians(master_seed, subkeys, shape):
    """CN(0,1) array: real and imaginary parts N(0, 1/2) each."""
    n = int(np.prod(shape))
    z = gaussians(master_seed, subkeys, 2 * n) / np.sqrt(2.0)
    return (z[:n] + 1j * z[n:]).reshape(shape)
