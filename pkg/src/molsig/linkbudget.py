"""Success probabilities against a reception threshold, and their inversion.

A transmission counts as successful when the received signal strength
meets a threshold tau, so the success probability is P(Y >= tau) under
the analytic signal distribution.  Because the signal scales linearly
with the molecule count M at fixed tau, success is non-decreasing in M,
which makes the minimum-M inversion a clean bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analytic import DriftMode, SignalDistribution, drift_pdf_logy, free_cdf_quadrature
from .channel import ChannelModel, ChannelParams, log_peak_response
from .errors import UnachievableTargetError
from .geometry import DiskRegion
from ._quadrature import integrate

#: Upper bound of the molecule-count search before a target is declared
#: unachievable.
MAX_MOLECULES = float(2**32)

#: Relative width at which the bisection over M stops.
M_RELATIVE_TOL = 1e-4


@dataclass(frozen=True)
class ReceptionRule:
    """Reception threshold (same units as the model's response) and the
    success probability a link is required to reach."""

    threshold: float
    target_probability: float

    def __post_init__(self):
        if not (math.isfinite(self.threshold) and self.threshold > 0.0):
            raise ValueError(f"threshold must be positive, got {self.threshold!r}")
        if not 0.0 < self.target_probability < 1.0:
            raise ValueError(
                f"target_probability must lie in (0, 1), got {self.target_probability!r}"
            )


def _drift_tail_mass(dist: SignalDistribution, tau: float) -> float:
    """P(Y >= tau) by quadrature of the two-branch drift density.

    Substituting y = y_max * exp(-s^2/(4Dt)) turns the integral into one
    over s = sqrt(z) with a bounded integrand (the 1/sqrt singularity at
    the peak cancels), with kinks only where a branch leaves the disk.
    """
    if tau >= dist.y_max:
        return 0.0
    s_hi = math.sqrt(dist.four_dt * (dist.log_peak - math.log(tau)))

    def f(s):
        w = dist.log_peak - s * s / dist.four_dt
        return drift_pdf_logy(w, dist, DriftMode.TWO_BRANCH) * 2.0 * s / dist.four_dt

    shift = dist.params.drift_shift
    breaks = [b for b in (shift, dist.region.diameter - shift) if 0.0 < b < s_hi]
    value, _ = integrate(f, 0.0, s_hi, rtol=1e-9, atol=1e-12, breakpoints=breaks)
    return value


def success_probability(rule: ReceptionRule, dist: SignalDistribution) -> float:
    """P(received signal >= rule.threshold), clamped to [0, 1]."""
    tau = rule.threshold
    if dist.params.model is ChannelModel.FREE_DIFFUSION:
        p = 1.0 - free_cdf_quadrature(tau, dist)
    else:
        p = _drift_tail_mass(dist, tau)
    return float(np.clip(p, 0.0, 1.0))


def _success_at(m: float, rule: ReceptionRule, params: ChannelParams,
                region: DiskRegion) -> float:
    dist = SignalDistribution.from_channel(replace(params, molecules=m), region)
    return success_probability(rule, dist)


def threshold_molecules(rule: ReceptionRule, params: ChannelParams,
                        region: DiskRegion) -> float:
    """Smallest molecule count reaching ``rule.target_probability``.

    ``params.molecules`` is ignored; the count is solved for.  The lower
    bracket is the M at which the threshold equals the peak response
    (success exactly 0); the upper bracket grows geometrically until the
    target is met, up to :data:`MAX_MOLECULES`, beyond which
    UnachievableTargetError is raised.  Bisection then narrows to relative
    width :data:`M_RELATIVE_TOL` and the upper end is returned, so the
    result is guaranteed to meet the target.
    """
    target = rule.target_probability
    m_low = rule.threshold / math.exp(log_peak_response(replace(params, molecules=1.0)))
    hi = 2.0 * m_low
    while _success_at(hi, rule, params, region) < target:
        hi *= 2.0
        if hi > MAX_MOLECULES:
            raise UnachievableTargetError(
                f"success probability stays below {target} for all M up to "
                f"{MAX_MOLECULES:.3g}",
                target=target,
                bound=MAX_MOLECULES,
            )
    lo = hi / 2.0
    while hi - lo > M_RELATIVE_TOL * hi:
        mid = 0.5 * (lo + hi)
        if _success_at(mid, rule, params, region) >= target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class SweepPoint:
    """One radius of a sweep; ``molecules`` is None when the solver failed."""

    radius: float
    molecules: float | None
    error: str | None = None


def radius_sweep(rule: ReceptionRule, params: ChannelParams,
                 radii) -> list[SweepPoint]:
    """Minimum molecule count per region radius.

    ``radii`` must be non-decreasing (duplicates allowed).  Solver failures
    are recorded per radius and the sweep continues.
    """
    radii = [float(r) for r in radii]
    if any(b < a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be non-decreasing")
    out = []
    for r in radii:
        try:
            m = threshold_molecules(rule, params, DiskRegion(r))
            out.append(SweepPoint(radius=r, molecules=m))
        except UnachievableTargetError as exc:
            out.append(SweepPoint(radius=r, molecules=None, error=str(exc)))
    return out
