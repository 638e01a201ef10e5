"""Unit-suffix parsing for command-line and config-file values.

All internal computation is SI; these helpers accept the handful of
suffixes the experiments actually mix (mm vs m, cm2/s vs m2/s, per-mm
densities) and normalize at the boundary.  Bare numbers are taken as SI.
"""

from __future__ import annotations

import re

from .errors import ConfigError

LENGTH_UNITS = {"m": 1.0, "mm": 1e-3}
DIFFUSIVITY_UNITS = {"m2/s": 1.0, "cm2/s": 1e-4}
VELOCITY_UNITS = {"m/s": 1.0, "mm/s": 1e-3}
AREA_DENSITY_UNITS = {"/m2": 1.0, "/mm2": 1e6}
LINE_DENSITY_UNITS = {"/m": 1.0, "/mm": 1e3}

_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([a-zA-Z/0-9]*)\s*$")


def parse_quantity(text: str, units: dict[str, float], kind: str) -> float:
    """Parse ``text`` as a number with an optional unit suffix."""
    m = _QUANTITY_RE.match(str(text))
    if not m:
        raise ConfigError(f"cannot parse {kind} value {text!r}")
    number, suffix = m.groups()
    try:
        value = float(number)
    except ValueError:
        raise ConfigError(f"cannot parse {kind} value {text!r}") from None
    if not suffix:
        return value
    if suffix not in units:
        raise ConfigError(
            f"unknown {kind} unit {suffix!r} (accepted: {', '.join(units)})"
        )
    return value * units[suffix]


def parse_length(text: str) -> float:
    return parse_quantity(text, LENGTH_UNITS, "length")


def parse_diffusivity(text: str) -> float:
    return parse_quantity(text, DIFFUSIVITY_UNITS, "diffusivity")


def parse_velocity(text: str) -> float:
    return parse_quantity(text, VELOCITY_UNITS, "velocity")


def parse_threshold(text: str, model: str) -> float:
    """Thresholds follow the model's response units: per-area for free
    diffusion, per-length for drift."""
    units = dict(AREA_DENSITY_UNITS) if model == "free" else dict(LINE_DENSITY_UNITS)
    return parse_quantity(text, units, "threshold")
