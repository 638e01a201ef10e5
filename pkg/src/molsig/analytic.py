"""Closed-form distributions of the received signal strength.

The received signal Y = response(X) inherits randomness from the pair
distance X of two uniform nodes in a disk.  For free diffusion both the
density and a series form of the cumulative distribution are available;
for drift diffusion the density is built by composing the explicit
transformation steps (shift u = x - v*t, square z = u^2, then the
log-inverse of the response), and the cumulative distribution is obtained
by quadrature.

Numerical conventions
---------------------
* All cumulative distributions follow the standard orientation
  P(Y <= y), so H(y_min) = 0 and H(y_max) = 1.
* Signal supports can span hundreds of decades for realistic SI
  parameters, so every evaluator works from log(y) internally and the
  ``*_logy`` variants accept log-signal arguments directly, staying exact
  where y itself would underflow float64.
* Integrals run in substituted variables (angle phi for the distance
  integrand, sqrt offsets near the drift peak) that remove the endpoint
  singularities of the raw integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .channel import ChannelModel, ChannelParams, log_peak_response
from .geometry import DiskRegion, distance_cdf, distance_pdf, distance_power_pdf
from ._quadrature import integrate


class DriftMode(Enum):
    """Branch handling for the drift-diffusion density.

    PAPER_SINGLE_BRANCH keeps only the u = +sqrt(z) branch of the square
    transform, so the receiver side closer than the drift displacement is
    ignored and the density integrates to P(X >= v*t).  TWO_BRANCH adds
    the u = -sqrt(z) branch and integrates to 1.
    """

    PAPER_SINGLE_BRANCH = "single"
    TWO_BRANCH = "two"


class SeriesStatus(Enum):
    CONVERGED = "converged"
    TRUNCATED = "truncated"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class SeriesTruncation:
    """Stopping rule for series evaluation.

    Evaluation stops at the earlier of ``max_terms`` terms or the first
    term smaller in magnitude than ``tail_tolerance``.
    """

    max_terms: int = 200
    tail_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.tail_tolerance > 0.0:
            raise ValueError("tail_tolerance must be positive")


class SeriesCdf(NamedTuple):
    """Series CDF value plus its convergence report."""

    value: float
    status: SeriesStatus
    terms: int


def log_support_bounds(params: ChannelParams, region: DiskRegion) -> tuple[float, float]:
    """(log y_min, log y_max) of the attainable signal for x in [0, 2r]."""
    shift = params.drift_shift if params.model is ChannelModel.DRIFT_DIFFUSION else 0.0
    log_peak = log_peak_response(params)
    x_best = min(max(shift, 0.0), region.diameter)
    d_far = max(shift, abs(region.diameter - shift))
    log_top = log_peak - (x_best - shift) ** 2 / params.four_dt
    log_bot = log_peak - d_far**2 / params.four_dt
    return log_bot, log_top


def support_bounds(params: ChannelParams, region: DiskRegion) -> tuple[float, float]:
    """(y_min, y_max); y_min may underflow to 0.0 for wide supports."""
    log_bot, log_top = log_support_bounds(params, region)
    return math.exp(log_bot), math.exp(log_top)


@dataclass(frozen=True)
class SignalDistribution:
    """Analytic distribution of the received signal for one channel setup.

    ``y_min``/``y_max`` are the support endpoints as floats; the exact log
    endpoints are kept alongside because y_min underflows to 0.0 whenever
    the disk is much wider than the diffusion length.
    """

    params: ChannelParams
    region: DiskRegion
    y_min: float
    y_max: float
    log_y_min: float
    log_y_max: float

    @classmethod
    def from_channel(cls, params: ChannelParams, region: DiskRegion) -> "SignalDistribution":
        log_bot, log_top = log_support_bounds(params, region)
        return cls(params=params, region=region,
                   y_min=math.exp(log_bot), y_max=math.exp(log_top),
                   log_y_min=log_bot, log_y_max=log_top)

    def __post_init__(self):
        if not self.log_y_min < self.log_y_max:
            raise ValueError("support is empty: log_y_min must be < log_y_max")

    @property
    def support(self) -> tuple[float, float]:
        return self.y_min, self.y_max

    @property
    def four_dt(self) -> float:
        return self.params.four_dt

    @property
    def log_peak(self) -> float:
        return log_peak_response(self.params)


def _require_model(dist: SignalDistribution, model: ChannelModel, what: str) -> None:
    if dist.params.model is not model:
        raise ValueError(f"{what} requires the {model.value}-diffusion model")


def _z_of_log(logy, dist: SignalDistribution):
    """Squared (shifted) displacement from log signal values."""
    return dist.four_dt * (dist.log_peak - logy)


# ---------------------------------------------------------------------------
# free diffusion
# ---------------------------------------------------------------------------

def free_pdf(y, dist: SignalDistribution):
    """Density of the free-diffusion signal at ``y``; zero off support.

    Composition of the squared-distance density with the log inverse of
    the response: h(y) = f_{X^2}(z(y)) * 4*D*t / y, with the exact limit
    value 4*D*t/(r^2*y_max) at the upper endpoint.
    """
    _require_model(dist, ChannelModel.FREE_DIFFUSION, "free_pdf")
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)
    out = np.zeros_like(y_arr)
    pos = y_arr > 0.0
    if np.any(pos):
        with np.errstate(divide="ignore"):
            out[pos] = free_pdf_logy(np.log(y_arr[pos]), dist) / y_arr[pos]
    return float(out[0]) if scalar else out


def free_pdf_logy(logy, dist: SignalDistribution):
    """Density of log(Y) for free diffusion, i.e. h(e^w) * e^w.

    Exact for arbitrarily wide supports; use this instead of
    :func:`free_pdf` when y itself would underflow.
    """
    _require_model(dist, ChannelModel.FREE_DIFFUSION, "free_pdf_logy")
    w = np.asarray(logy, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    z_top = dist.region.diameter ** 2
    z = _z_of_log(w, dist)
    slack = 1e-10 * max(z_top, dist.four_dt)
    inside = (z >= -slack) & (z <= z_top + slack)
    out = np.zeros_like(w)
    if np.any(inside):
        z_in = np.clip(z[inside], 0.0, z_top)
        out[inside] = distance_power_pdf(z_in, 2.0, dist.region) * dist.four_dt
    return float(out[0]) if scalar else out


def free_cdf_quadrature(y, dist: SignalDistribution, *, rtol: float = 1e-11):
    """P(Y <= y) for free diffusion by adaptive quadrature of the density.

    The integral runs in the substituted angle variable, where the
    integrand is a bounded trigonometric polynomial, so the result is
    reliable even when the support spans thousands of decades.  Array
    input is evaluated in one cumulative pass.  Raises ConvergenceError
    (with the residual estimate) if the quadrature cannot meet its target.
    """
    _require_model(dist, ChannelModel.FREE_DIFFUSION, "free_cdf_quadrature")
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)

    z_top = dist.region.diameter ** 2
    out = np.zeros_like(y_arr)
    pos = y_arr > 0.0
    z = np.full_like(y_arr, np.inf)
    z[pos] = _z_of_log(np.log(y_arr[pos]), dist)

    below = z >= z_top  # y <= y_min
    above = z <= 0.0    # y >= y_max
    out[above] = 1.0
    interior = ~(below | above)
    if np.any(interior):
        x = np.sqrt(z[interior])
        out[interior] = 1.0 - distance_cdf(x, dist.region, rtol=rtol)
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def free_cdf_series(y, dist: SignalDistribution,
                    trunc: SeriesTruncation | None = None) -> SeriesCdf:
    """P(Y <= y) for free diffusion from the closed-form series.

    Termwise integration of the squared-distance density, using the
    arccos power series (central-binomial coefficients) and the binomial
    series of the square-root factor.  Convergence slows as y approaches
    the support floor, where the series argument reaches its radius; the
    returned status says whether the tail condition was met.
    """
    _require_model(dist, ChannelModel.FREE_DIFFUSION, "free_cdf_series")
    if trunc is None:
        trunc = SeriesTruncation()
    y = float(y)
    if y <= 0.0:
        return SeriesCdf(0.0, SeriesStatus.CONVERGED, 0)

    r = dist.region.radius
    z_top = 4.0 * r * r
    z = float(np.clip(_z_of_log(math.log(y), dist), 0.0, z_top))

    # F_{X^2}(z) = z/r^2 - sum_n (A_n + B_n) with
    #   A_n = 4*z/(pi*r^2*(2n+3)) * alpha_n * c^(2n+1),  c = sqrt(z)/(2r)
    #   B_n = 2*z^(3/2)/(pi*r^3*(2n+3)) * binom(1/2, n) * (-z/(4r^2))^n
    c = math.sqrt(z) / (2.0 * r)
    w = z / z_top
    pref_a = 4.0 * z / (math.pi * r * r)
    pref_b = 2.0 * z ** 1.5 / (math.pi * r ** 3)

    cdf_z = z / (r * r)
    alpha = 1.0
    cpow = c
    g = 1.0
    status = SeriesStatus.TRUNCATED
    terms = trunc.max_terms
    for n in range(trunc.max_terms):
        term_a = pref_a * alpha * cpow / (2 * n + 3)
        term_b = pref_b * g / (2 * n + 3)
        tail = abs(term_a) + abs(term_b)
        if not math.isfinite(tail):
            return SeriesCdf(math.nan, SeriesStatus.DIVERGED, n)
        cdf_z -= term_a + term_b
        if tail < trunc.tail_tolerance:
            status = SeriesStatus.CONVERGED
            terms = n + 1
            break
        alpha *= (2 * n + 1) ** 2 / (2.0 * (n + 1) * (2 * n + 3))
        cpow *= c * c
        g *= (n - 0.5) / (n + 1.0) * w

    if not math.isfinite(cdf_z):
        return SeriesCdf(math.nan, SeriesStatus.DIVERGED, terms)
    value = min(max(1.0 - cdf_z, 0.0), 1.0)
    return SeriesCdf(value, status, terms)


# ---------------------------------------------------------------------------
# diffusion with drift
# ---------------------------------------------------------------------------

def _drift_branch_density(s, dist: SignalDistribution, mode: DriftMode):
    """f_U contributions at |u| = s, with each branch cut to u in [-vt, 2r-vt]."""
    shift = dist.params.drift_shift
    dens = distance_pdf(s + shift, dist.region)
    if mode is DriftMode.TWO_BRANCH:
        dens = dens + distance_pdf(shift - s, dist.region)
    return dens


def drift_pdf(y, dist: SignalDistribution, mode: DriftMode = DriftMode.TWO_BRANCH):
    """Density of the drift-diffusion signal at ``y``.

    Built by composing the proof-style steps: shift by the drift
    displacement, square, then invert the response in log space; the
    Jacobian of the last step is 4*D*t/y.  For 0 < v*t < 2r the density
    diverges (integrably) at the peak, where inf is returned.  Raises
    ValueError if ``y`` exceeds the peak or is not positive.
    """
    _require_model(dist, ChannelModel.DRIFT_DIFFUSION, "drift_pdf")
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)
    if np.any(y_arr <= 0.0):
        raise ValueError("signal value must be positive")
    logy = np.log(y_arr)
    out = drift_pdf_logy(logy, dist, mode) / y_arr
    return float(out[0]) if scalar else out


def drift_pdf_logy(logy, dist: SignalDistribution, mode: DriftMode = DriftMode.TWO_BRANCH):
    """Density of log(Y) for drift diffusion (underflow-safe variant)."""
    _require_model(dist, ChannelModel.DRIFT_DIFFUSION, "drift_pdf_logy")
    w = np.asarray(logy, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)

    z = _z_of_log(w, dist)
    slack = 1e-10 * max(dist.region.diameter ** 2, dist.four_dt)
    if np.any(z < -slack):
        raise ValueError("signal value exceeds the drift peak")
    z = np.maximum(z, 0.0)

    out = np.zeros_like(w)
    pos = z > 0.0
    if np.any(pos):
        s = np.sqrt(z[pos])
        out[pos] = _drift_branch_density(s, dist, mode) * dist.four_dt / (2.0 * s)

    at_peak = ~pos
    if np.any(at_peak):
        shift = dist.params.drift_shift
        if shift == 0.0:
            out[at_peak] = dist.four_dt / dist.region.radius ** 2
        elif shift < dist.region.diameter:
            out[at_peak] = np.inf
        # else: the peak is outside the attainable distances; density 0
    return float(out[0]) if scalar else out


def drift_cdf(y, dist: SignalDistribution, mode: DriftMode = DriftMode.TWO_BRANCH):
    """P(Y <= y) for drift diffusion, by quadrature in the distance domain.

    Signals above ``y`` correspond to the distance band |x - v*t| <=
    sqrt(z(y)), so the CDF is one minus the distance-CDF mass of that
    band.  With PAPER_SINGLE_BRANCH the result is the (defective)
    cumulative mass of the single-branch density, topping out at
    P(X >= v*t).
    """
    _require_model(dist, ChannelModel.DRIFT_DIFFUSION, "drift_cdf")
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)

    shift = dist.params.drift_shift
    two_r = dist.region.diameter
    z = np.full_like(y_arr, np.inf)
    pos = y_arr > 0.0
    z[pos] = np.maximum(_z_of_log(np.log(y_arr[pos]), dist), 0.0)
    s = np.sqrt(np.where(np.isfinite(z), z, np.inf))

    hi = np.minimum(shift + s, two_r)
    f_hi = distance_cdf(np.where(np.isfinite(hi), hi, two_r), dist.region)
    if mode is DriftMode.TWO_BRANCH:
        lo = np.clip(shift - s, 0.0, two_r)
        f_lo = distance_cdf(lo, dist.region)
        out = 1.0 - (f_hi - f_lo)
    else:
        out = 1.0 - f_hi
    out = np.clip(out, 0.0, 1.0)
    out[~pos] = 0.0
    return float(out[0]) if scalar else out
