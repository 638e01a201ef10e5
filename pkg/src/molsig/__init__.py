"""Received-signal-strength distributions for molecular nanonode links.

Two nanonodes dropped uniformly at random in a disk communicate by
releasing molecules; the signal arriving at the receiver is then a random
variable through the random pair distance.  This package provides the
analytic density/CDF of that signal for free diffusion and diffusion with
drift, a seeded Monte Carlo oracle to validate them, and link-budget
tools (success probability against a reception threshold, minimum
molecule counts).  The ``molsig`` CLI exposes the same machinery as
plot-ready CSV/JSON tables.
"""

from ._backend import HAVE_NUMBA, default_backend, resolve_backend
from .analytic import (
    DriftMode,
    SeriesCdf,
    SeriesStatus,
    SeriesTruncation,
    SignalDistribution,
    drift_cdf,
    drift_pdf,
    drift_pdf_logy,
    free_cdf_quadrature,
    free_cdf_series,
    free_pdf,
    free_pdf_logy,
    log_support_bounds,
    support_bounds,
)
from .channel import (
    ChannelModel,
    ChannelParams,
    drift_diffusion_response,
    free_diffusion_response,
    peak_response,
    response,
    response_inverse,
)
from .errors import ConfigError, ConvergenceError, UnachievableTargetError
from .geometry import (
    DiskRegion,
    DistanceSample,
    distance_cdf,
    distance_pdf,
    distance_power_pdf,
    sample_pair_distance,
    sample_pair_distances,
    sample_uniform_point,
    sample_uniform_points,
)
from .linkbudget import (
    ReceptionRule,
    SweepPoint,
    radius_sweep,
    success_probability,
    threshold_molecules,
)
from .montecarlo import (
    EmpiricalDistribution,
    ks_robustness,
    ks_statistic,
    l1_distance,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelModel",
    "ChannelParams",
    "ConfigError",
    "ConvergenceError",
    "DiskRegion",
    "DistanceSample",
    "DriftMode",
    "EmpiricalDistribution",
    "HAVE_NUMBA",
    "ReceptionRule",
    "SeriesCdf",
    "SeriesStatus",
    "SeriesTruncation",
    "SignalDistribution",
    "SweepPoint",
    "UnachievableTargetError",
    "default_backend",
    "distance_cdf",
    "distance_pdf",
    "distance_power_pdf",
    "drift_cdf",
    "drift_diffusion_response",
    "drift_pdf",
    "drift_pdf_logy",
    "free_cdf_quadrature",
    "free_cdf_series",
    "free_diffusion_response",
    "free_pdf",
    "free_pdf_logy",
    "ks_robustness",
    "ks_statistic",
    "l1_distance",
    "log_support_bounds",
    "peak_response",
    "radius_sweep",
    "resolve_backend",
    "response",
    "response_inverse",
    "sample_pair_distance",
    "sample_pair_distances",
    "sample_uniform_point",
    "sample_uniform_points",
    "simulate",
    "success_probability",
    "support_bounds",
    "threshold_molecules",
    "__version__",
]
