"""Hot sampling kernels: splitmix64 streams and disk pair distances.

Every kernel exists twice: a pure-numpy vectorized implementation and a
numba-compiled scalar loop.  Both consume the same counter-based splitmix64
stream, so the raw uniforms are bit-identical across backends; derived
floats can differ in the last ulp where libm and numpy's vector routines
round differently.

Stream layout: sample ``i`` of a chunk consumes the four uniforms at
counter positions ``4*i + 1 .. 4*i + 4`` as (radius1, angle1, radius2,
angle2).  Chunk streams are keyed from (seed, chunk_index), which is what
makes the Monte Carlo engine independent of worker count.
"""

from __future__ import annotations

import numpy as np

from ._backend import HAVE_NUMBA, resolve_backend

# splitmix64 constants (Steele, Lea & Flood's finalizer)
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK64 = 0xFFFFFFFFFFFFFFFF

_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53
_TWO_PI = 2.0 * np.pi

# numpy scalar constants for the vectorized path
_GAMMA_U = np.uint64(_GAMMA)
_MIX1_U = np.uint64(_MIX1)
_MIX2_U = np.uint64(_MIX2)


def _mix64_int(h: int) -> int:
    # Python-int variant, used for key derivation (numpy scalars warn on wrap).
    h &= _MASK64
    h = ((h ^ (h >> 30)) * _MIX1) & _MASK64
    h = ((h ^ (h >> 27)) * _MIX2) & _MASK64
    return h ^ (h >> 31)


def chunk_key(seed: int, chunk_index: int) -> np.uint64:
    """Stream key for one chunk, derived from (seed, chunk_index)."""
    s = int(seed) & _MASK64
    k = _mix64_int(s + _GAMMA)
    k = _mix64_int(k + (chunk_index + 1) * _GAMMA)
    return np.uint64(k)


def _mix64_vec(h):
    h = (h ^ (h >> np.uint64(30))) * _MIX1_U
    h = (h ^ (h >> np.uint64(27))) * _MIX2_U
    return h ^ (h >> np.uint64(31))


def _uniform_stream_numpy(key: np.uint64, n: int) -> np.ndarray:
    idx = np.arange(1, n + 1, dtype=np.uint64)
    u = _mix64_vec(key + idx * _GAMMA_U)
    return (u >> np.uint64(11)) * _INV_2_53


def _pair_distances_numpy(radius: float, key: np.uint64, n: int) -> np.ndarray:
    u = _uniform_stream_numpy(key, 4 * n).reshape(n, 4)
    rho1 = radius * np.sqrt(u[:, 0])
    th1 = _TWO_PI * u[:, 1]
    rho2 = radius * np.sqrt(u[:, 2])
    th2 = _TWO_PI * u[:, 3]
    dx = rho1 * np.cos(th1) - rho2 * np.cos(th2)
    dy = rho1 * np.sin(th1) - rho2 * np.sin(th2)
    return np.sqrt(dx * dx + dy * dy)


if HAVE_NUMBA:
    import numba

    @numba.njit(cache=True, nogil=True)
    def _mix64_nb(h):
        h = (h ^ (h >> np.uint64(30))) * _MIX1_U
        h = (h ^ (h >> np.uint64(27))) * _MIX2_U
        return h ^ (h >> np.uint64(31))

    @numba.njit(cache=True, nogil=True)
    def _uniform_stream_numba(key, n):
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            u = _mix64_nb(key + np.uint64(i + 1) * _GAMMA_U)
            out[i] = (u >> np.uint64(11)) * _INV_2_53
        return out

    @numba.njit(cache=True, nogil=True)
    def _pair_distances_numba(radius, key, n):
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            k0 = np.uint64(4 * i)
            u0 = _mix64_nb(key + (k0 + np.uint64(1)) * _GAMMA_U)
            u1 = _mix64_nb(key + (k0 + np.uint64(2)) * _GAMMA_U)
            u2 = _mix64_nb(key + (k0 + np.uint64(3)) * _GAMMA_U)
            u3 = _mix64_nb(key + (k0 + np.uint64(4)) * _GAMMA_U)
            f0 = (u0 >> np.uint64(11)) * _INV_2_53
            f1 = (u1 >> np.uint64(11)) * _INV_2_53
            f2 = (u2 >> np.uint64(11)) * _INV_2_53
            f3 = (u3 >> np.uint64(11)) * _INV_2_53
            rho1 = radius * np.sqrt(f0)
            th1 = _TWO_PI * f1
            rho2 = radius * np.sqrt(f2)
            th2 = _TWO_PI * f3
            dx = rho1 * np.cos(th1) - rho2 * np.cos(th2)
            dy = rho1 * np.sin(th1) - rho2 * np.sin(th2)
            out[i] = np.sqrt(dx * dx + dy * dy)
        return out

else:  # pragma: no cover - exercised only without numba installed
    _uniform_stream_numba = None
    _pair_distances_numba = None


def uniform_stream(key: np.uint64, n: int, backend: str | None = None) -> np.ndarray:
    """``n`` uniforms in [0, 1) from the stream under ``key``."""
    if resolve_backend(backend) == "numba":
        return _uniform_stream_numba(np.uint64(key), n)
    return _uniform_stream_numpy(np.uint64(key), n)


def pair_distances(radius: float, key: np.uint64, n: int, backend: str | None = None) -> np.ndarray:
    """Distances between ``n`` independent uniform point pairs in a disk."""
    if resolve_backend(backend) == "numba":
        return _pair_distances_numba(float(radius), np.uint64(key), n)
    return _pair_distances_numpy(float(radius), np.uint64(key), n)
