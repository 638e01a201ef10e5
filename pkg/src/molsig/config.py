"""Experiment configuration: file format, defaults, and resolution.

Config files are flat ``key = value`` text with ``#`` comments.  Values
may carry the unit suffixes from :mod:`molsig.units`.  Command-line flags
override file values, and every emitted data file embeds the fully
resolved configuration in this same format so a run can be replayed
byte-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .channel import ChannelModel
from .errors import ConfigError
from . import units

_MODELS = {m.value: m for m in ChannelModel}
_FORMATS = ("csv", "json")
_SWEEP_PARAMS = ("molecules", "radius")

#: Keys allowed in config files / embedded config blocks.
KNOWN_KEYS = (
    "command", "model", "radius", "diffusion", "time", "molecules",
    "velocity", "tau", "target", "n_samples", "seed", "n_bins",
    "y_min", "y_max", "y_points", "sweep_param", "sweep_values",
    "format", "backend",
)


@dataclass
class ExperimentConfig:
    """Fully resolved description of one CLI experiment (SI units)."""

    command: str
    model: ChannelModel = ChannelModel.FREE_DIFFUSION
    radius: float = 3e-3
    diffusion_coeff: float = 1e-9
    time: float = 300.0
    molecules: float = 1.0
    drift_velocity: float | None = None
    tau: float | None = None
    target_probability: float = 0.9
    n_samples: int = 100_000
    seed: int = 0
    n_bins: int = 100
    y_min: float | None = None
    y_max: float | None = None
    y_points: int = 101
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] | None = None
    output_format: str = "csv"
    backend: str | None = None
    output_path: str | None = None

    def validate(self) -> None:
        for name in ("radius", "diffusion_coeff", "time", "molecules"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ConfigError(f"{name} must be positive, got {v!r}")
        if self.model is ChannelModel.DRIFT_DIFFUSION:
            if self.drift_velocity is None or self.drift_velocity < 0.0:
                raise ConfigError("the drift model needs velocity >= 0")
        elif self.drift_velocity is not None:
            raise ConfigError("velocity is only meaningful for the drift model")
        if self.tau is not None and not self.tau > 0.0:
            raise ConfigError(f"tau must be positive, got {self.tau!r}")
        if not 0.0 < self.target_probability < 1.0:
            raise ConfigError("target must lie strictly between 0 and 1")
        if self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.n_bins < 2:
            raise ConfigError("n_bins must be >= 2")
        if self.y_points < 2:
            raise ConfigError("y_points must be >= 2")
        if (self.y_min is None) != (self.y_max is None):
            raise ConfigError("y_min and y_max must be given together")
        if self.y_min is not None and not self.y_min < self.y_max:
            raise ConfigError("y_min must be smaller than y_max")
        if self.output_format not in _FORMATS:
            raise ConfigError(f"format must be one of {_FORMATS}")
        if self.sweep_param is not None:
            if self.sweep_param not in _SWEEP_PARAMS:
                raise ConfigError(
                    f"sweep_param must be one of {_SWEEP_PARAMS}, got {self.sweep_param!r}"
                )
            if not self.sweep_values:
                raise ConfigError("sweep_values must be a non-empty list")
            if any(not v > 0.0 for v in self.sweep_values):
                raise ConfigError("sweep values must all be positive")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat key=value config file into raw string values."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        raw[key] = value.strip()
    return raw


def _parse_int(key: str, text: str) -> int:
    try:
        return int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {text!r}") from None


def parse_value_list(text: str, item_parser) -> tuple[float, ...]:
    """Parse "a,b,c" or "start:stop:count" into a tuple of floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range syntax is start:stop:count, got {text!r}")
        start = item_parser(parts[0])
        stop = item_parser(parts[1])
        count = _parse_int("count", parts[2])
        if count < 1:
            raise ConfigError("range count must be >= 1")
        if count == 1:
            return (start,)
        step = (stop - start) / (count - 1)
        return tuple(start + i * step for i in range(count))
    return tuple(item_parser(p) for p in text.split(",") if p.strip())


def resolve_config(command: str, file_values: dict[str, str],
                   flag_values: dict[str, str]) -> ExperimentConfig:
    """Merge file values and flag overrides into a validated config."""
    merged = dict(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})

    embedded = merged.pop("command", None)
    if embedded is not None and embedded != command:
        raise ConfigError(
            f"config file was written for command {embedded!r}, not {command!r}"
        )

    model_text = merged.pop("model", "free")
    if model_text not in _MODELS:
        raise ConfigError(f"model must be one of {tuple(_MODELS)}, got {model_text!r}")
    model = _MODELS[model_text]

    cfg = ExperimentConfig(command=command, model=model)
    for key, text in merged.items():
        text = str(text)
        if key == "radius":
            cfg.radius = units.parse_length(text)
        elif key == "diffusion":
            cfg.diffusion_coeff = units.parse_diffusivity(text)
        elif key == "time":
            cfg.time = _parse_float(key, text)
        elif key == "molecules":
            cfg.molecules = _parse_float(key, text)
        elif key == "velocity":
            cfg.drift_velocity = units.parse_velocity(text)
        elif key == "tau":
            cfg.tau = units.parse_threshold(text, model.value)
        elif key == "target":
            cfg.target_probability = _parse_float(key, text)
        elif key == "n_samples":
            cfg.n_samples = _parse_int(key, text)
        elif key == "seed":
            cfg.seed = _parse_int(key, text)
        elif key == "n_bins":
            cfg.n_bins = _parse_int(key, text)
        elif key == "y_min":
            cfg.y_min = _parse_float(key, text)
        elif key == "y_max":
            cfg.y_max = _parse_float(key, text)
        elif key == "y_points":
            cfg.y_points = _parse_int(key, text)
        elif key == "sweep_param":
            cfg.sweep_param = text
        elif key == "sweep_values":
            parser = units.parse_length if merged.get("sweep_param") == "radius" \
                else lambda s: _parse_float("sweep_values", s)
            cfg.sweep_values = parse_value_list(text, parser)
        elif key == "format":
            cfg.output_format = text
        elif key == "backend":
            cfg.backend = text
        else:  # pragma: no cover - KNOWN_KEYS guards file input
            raise ConfigError(f"unknown config key {key!r}")
    cfg.validate()
    return cfg


def to_flat_dict(cfg: ExperimentConfig) -> dict[str, str]:
    """Canonical (SI, repr-formatted) key=value view for embedding."""
    out: dict[str, str] = {
        "command": cfg.command,
        "model": cfg.model.value,
        "radius": repr(cfg.radius),
        "diffusion": repr(cfg.diffusion_coeff),
        "time": repr(cfg.time),
        "molecules": repr(cfg.molecules),
    }
    if cfg.drift_velocity is not None:
        out["velocity"] = repr(cfg.drift_velocity)
    if cfg.tau is not None:
        out["tau"] = repr(cfg.tau)
    if cfg.command in ("success", "threshold", "sweep"):
        out["target"] = repr(cfg.target_probability)
    out["n_samples"] = str(cfg.n_samples)
    out["seed"] = str(cfg.seed)
    out["n_bins"] = str(cfg.n_bins)
    if cfg.y_min is not None:
        out["y_min"] = repr(cfg.y_min)
        out["y_max"] = repr(cfg.y_max)
        out["y_points"] = str(cfg.y_points)
    if cfg.sweep_param is not None:
        out["sweep_param"] = cfg.sweep_param
        out["sweep_values"] = ",".join(repr(v) for v in cfg.sweep_values)
    out["format"] = cfg.output_format
    if cfg.backend is not None:
        out["backend"] = cfg.backend
    return out
