"""Uniform node pairs in a disk: sampling and distance distributions.

Distances between two independent uniform points in a disk of radius r
live on [0, 2r] with density

    f(x) = (2x/r^2) * ((2/pi) * arccos(x/(2r)) - (x/(pi*r)) * sqrt(1 - x^2/(4r^2)))

("disk line picking").  This module samples that distribution, evaluates
the density and its power transforms, and integrates it.  All lengths are
SI meters.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._quadrature import cumulative, integrate

#: Samples per random-stream chunk.  Fixed so that results depend only on
#: (seed, n_samples), never on how many workers consume the chunks.
CHUNK_SIZE = 16384

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DiskRegion:
    """Circular deployment area of radius ``radius`` (meters)."""

    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not math.isfinite(r) or r <= 0.0:
            raise ValueError(f"radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class DistanceSample:
    """One sampled transmitter-receiver distance (meters)."""

    value: float


def sample_uniform_point(region: DiskRegion, rng: np.random.Generator) -> np.ndarray:
    """Draw one point uniformly from the disk.

    Uses the inverse-CDF radial method (radius ``r*sqrt(U)``, angle uniform
    on [0, 2*pi)), consuming exactly two uniforms, so a given generator
    state always yields the same point.
    """
    rho = region.radius * math.sqrt(rng.random())
    theta = _TWO_PI * rng.random()
    return np.array([rho * math.cos(theta), rho * math.sin(theta)])


def sample_uniform_points(region: DiskRegion, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` uniform points from the disk, shape (n, 2)."""
    u = rng.random((n, 2))
    rho = region.radius * np.sqrt(u[:, 0])
    theta = _TWO_PI * u[:, 1]
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])


def sample_pair_distance(region: DiskRegion, rng: np.random.Generator) -> DistanceSample:
    """Distance between two independent uniform points in the disk."""
    p = sample_uniform_point(region, rng)
    q = sample_uniform_point(region, rng)
    return DistanceSample(float(math.hypot(p[0] - q[0], p[1] - q[1])))


def sample_pair_distances(
    region: DiskRegion,
    n_samples: int,
    seed: int,
    *,
    n_workers: int = 1,
    backend: str | None = None,
) -> np.ndarray:
    """Vector of ``n_samples`` pair distances from a seeded stream.

    The index space is split into fixed chunks of :data:`CHUNK_SIZE`; each
    chunk's splitmix64 stream is keyed by (seed, chunk_index) and chunks are
    concatenated in index order, so the result is identical for any
    ``n_workers``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if n_samples > 2**62:
        raise OverflowError("n_samples exceeds the accumulator capacity")
    n_chunks = (n_samples + CHUNK_SIZE - 1) // CHUNK_SIZE
    sizes = [min(CHUNK_SIZE, n_samples - c * CHUNK_SIZE) for c in range(n_chunks)]
    keys = [_kernels.chunk_key(seed, c) for c in range(n_chunks)]

    def run(c: int) -> np.ndarray:
        return _kernels.pair_distances(region.radius, keys[c], sizes[c], backend)

    if n_workers <= 1 or n_chunks == 1:
        parts = [run(c) for c in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    return np.concatenate(parts) if len(parts) > 1 else parts[0]


def distance_pdf(x, region: DiskRegion):
    """Density of the pair distance at ``x``; zero outside [0, 2r]."""
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    r = region.radius
    out = np.zeros_like(x_arr)
    inside = (x_arr > 0.0) & (x_arr < 2.0 * r)
    xi = x_arr[inside]
    ratio = xi / (2.0 * r)
    root = np.sqrt(np.maximum(0.0, 1.0 - ratio * ratio))
    out[inside] = (2.0 * xi / r**2) * (
        (2.0 / np.pi) * np.arccos(ratio) - (xi / (np.pi * r)) * root
    )
    return float(out[0]) if scalar else out


def _arc_integrand(region: DiskRegion):
    # Distance CDF integrand after substituting x = 2r*sin(phi): the
    # sqrt/arccos endpoint singularities become polynomial in phi.
    def g(phi):
        s = np.sin(phi)
        c = np.cos(phi)
        return (8.0 / np.pi) * s * c * (np.pi - 2.0 * phi - 2.0 * s * c)

    return g


def distance_cdf(x, region: DiskRegion, *, rtol: float = 1e-12):
    """P(distance <= x), by adaptive quadrature of :func:`distance_pdf`.

    Integration runs in the angle variable phi = arcsin(x/(2r)), which
    removes the endpoint singularities; array input is evaluated in one
    cumulative pass over the sorted points.
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    phi = np.arcsin(np.clip(x_arr / region.diameter, 0.0, 1.0))
    g = _arc_integrand(region)

    order = np.argsort(phi, kind="stable")
    pts = np.concatenate([[0.0], phi[order]])
    cum = cumulative(g, pts, rtol=rtol)[1:]
    out = np.empty_like(cum)
    out[order] = np.clip(cum, 0.0, 1.0)
    out[x_arr <= 0.0] = 0.0
    out[x_arr >= region.diameter] = 1.0
    return float(out[0]) if scalar else out


def distance_pdf_norm(region: DiskRegion, *, rtol: float = 1e-12) -> float:
    """Total mass of :func:`distance_pdf` (a self-check; should be 1)."""
    value, _ = integrate(_arc_integrand(region), 0.0, 0.5 * np.pi, rtol=rtol)
    return value


def distance_power_pdf(z, beta: float, region: DiskRegion):
    """Density of (pair distance)**beta at ``z``; zero outside [0, (2r)**beta].

    This is the change-of-variables image of :func:`distance_pdf`:

        f_beta(z) = (1/beta) * z**(1/beta - 1) * f(z**(1/beta))

    At z = 0 the exact limit is returned: 0 for beta < 2, 1/r^2 for
    beta = 2, and inf for beta > 2 (an integrable divergence).
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise ValueError(f"beta must be positive and finite, got {beta!r}")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr < 0.0):
        raise ValueError("power-transformed distance must be nonnegative")
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    r = region.radius
    top = (2.0 * r) ** beta

    out = np.zeros_like(z_arr)
    inside = (z_arr > 0.0) & (z_arr <= top)
    zi = z_arr[inside]
    x = zi ** (1.0 / beta)
    out[inside] = (1.0 / beta) * zi ** (1.0 / beta - 1.0) * distance_pdf(x, region)

    at_zero = z_arr == 0.0
    if np.any(at_zero):
        if beta == 2.0:
            out[at_zero] = 1.0 / r**2
        elif beta > 2.0:
            out[at_zero] = np.inf
    return float(out[0]) if scalar else out
