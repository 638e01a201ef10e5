"""Deterministic channel impulse responses for molecular propagation.

Two models, kept exactly as commonly stated in the molecular communication
literature and therefore with different dimensionality:

* free diffusion (2-D Green's function), concentration per square meter:
      y(x) = M * exp(-x^2 / (4*D*t)) / (4*pi*D*t)
* diffusion with drift at mean flow speed v (1-D Wiener form),
  concentration per meter:
      y(x) = M * exp(-(x - v*t)^2 / (4*D*t)) / sqrt(4*pi*D*t)

All evaluation goes through log space so that huge exponents degrade to
graceful underflow instead of raising, which matters because realistic
SI parameter sets routinely produce exp(-1e4) and worse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class ChannelModel(Enum):
    FREE_DIFFUSION = "free"
    DRIFT_DIFFUSION = "drift"


@dataclass(frozen=True)
class ChannelParams:
    """Physical channel parameters, all SI.

    ``molecules`` is the impulse intensity M (total molecules in one short
    burst), modeled as a positive real so that root finding over M stays
    smooth; ``diffusion_coeff`` is D in m^2/s, ``time`` the observation
    instant in seconds, and ``drift_velocity`` the mean flow speed in m/s,
    required exactly when the model is drift diffusion.
    """

    model: ChannelModel
    molecules: float
    diffusion_coeff: float
    time: float
    drift_velocity: float | None = None

    def __post_init__(self):
        if not isinstance(self.model, ChannelModel):
            raise ValueError(f"model must be a ChannelModel, got {self.model!r}")
        for name in ("molecules", "diffusion_coeff", "time"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
            object.__setattr__(self, name, v)
        v = self.drift_velocity
        if self.model is ChannelModel.DRIFT_DIFFUSION:
            if v is None:
                raise ValueError("drift_velocity is required for the drift model")
            v = float(v)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"drift_velocity must be >= 0 and finite, got {v!r}")
            object.__setattr__(self, "drift_velocity", v)
        elif v is not None:
            raise ValueError("drift_velocity is only meaningful for the drift model")

    @property
    def four_dt(self) -> float:
        """4*D*t, the squared diffusion length scale (m^2)."""
        return 4.0 * self.diffusion_coeff * self.time

    @property
    def drift_shift(self) -> float:
        """v*t, the mean displacement of the drifting cloud (m)."""
        if self.model is not ChannelModel.DRIFT_DIFFUSION:
            raise ValueError("drift_shift is defined only for the drift model")
        return self.drift_velocity * self.time


def log_peak_response(params: ChannelParams) -> float:
    """log of the model's maximum attainable response (over all x >= 0)."""
    log_norm = math.log(math.pi * params.four_dt)
    if params.model is ChannelModel.FREE_DIFFUSION:
        return math.log(params.molecules) - log_norm
    return math.log(params.molecules) - 0.5 * log_norm


def peak_response(params: ChannelParams) -> float:
    """Maximum attainable response: M/(4*pi*D*t) or M/sqrt(4*pi*D*t)."""
    return math.exp(log_peak_response(params))


def _check_nonnegative(x) -> np.ndarray:
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0):
        raise ValueError("distance must be nonnegative")
    return x_arr


def free_diffusion_response(x, params: ChannelParams):
    """Free-diffusion concentration (per m^2) at distance ``x``."""
    if params.model is not ChannelModel.FREE_DIFFUSION:
        raise ValueError("params.model must be FREE_DIFFUSION")
    x_arr = _check_nonnegative(x)
    out = np.exp(log_peak_response(params) - x_arr * x_arr / params.four_dt)
    return float(out) if np.ndim(x) == 0 else out


def drift_diffusion_response(x, params: ChannelParams):
    """Drift-diffusion concentration (per m) at distance ``x``."""
    if params.model is not ChannelModel.DRIFT_DIFFUSION:
        raise ValueError("params.model must be DRIFT_DIFFUSION")
    x_arr = _check_nonnegative(x)
    shifted = x_arr - params.drift_shift
    out = np.exp(log_peak_response(params) - shifted * shifted / params.four_dt)
    return float(out) if np.ndim(x) == 0 else out


def response(x, params: ChannelParams):
    """Model-dispatched impulse response."""
    if params.model is ChannelModel.FREE_DIFFUSION:
        return free_diffusion_response(x, params)
    return drift_diffusion_response(x, params)


#: Relative slack above the peak tolerated before response_inverse rejects
#: a query; covers round-off in externally stored response values.
_PEAK_SLACK = 1e-12


def response_inverse(y, params: ChannelParams):
    """Squared displacement z solving response(sqrt(z)) = y.

    For free diffusion z is the squared distance x^2; for drift it is the
    squared shifted distance (x - v*t)^2.  The peak maps to z = 0 exactly.
    Raises ValueError when y is not in (0, peak].
    """
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)
    if np.any(y_arr <= 0.0):
        raise ValueError("response value must be positive")
    log_peak = log_peak_response(params)
    # Near the peak the log difference cancels catastrophically, so take
    # the log of the ratio instead, which keeps the full precision of y.
    z = params.four_dt * (log_peak - np.log(y_arr))
    peak = math.exp(log_peak)
    if math.isfinite(peak):
        near = y_arr > 1e-3 * peak
        if np.any(near):
            z[near] = -params.four_dt * np.log(y_arr[near] / peak)
    if np.any(z < -_PEAK_SLACK * params.four_dt):
        raise ValueError("response value exceeds the model's peak")
    z = np.maximum(z, 0.0)
    return float(z[0]) if scalar else z
