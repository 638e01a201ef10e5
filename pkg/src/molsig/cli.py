"""Command-line front end: experiment configuration and data emission.

Subcommands produce plot-ready tables (CSV or JSON) for the analytic
distributions, the Monte Carlo oracle, and the link-budget solvers, plus
``reproduce figN`` presets for the reference figures.  Every output embeds
the fully resolved configuration, so re-running with the embedded values
reproduces the file byte for byte.

Exit codes: 0 success, 2 configuration error, 3 numerical
non-convergence, 4 unachievable success target.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from . import config as config_mod
from . import linkbudget, montecarlo, units
from ._backend import resolve_backend
from .analytic import (
    DriftMode,
    SeriesStatus,
    SignalDistribution,
    drift_cdf,
    drift_pdf,
    free_cdf_quadrature,
    free_cdf_series,
    free_pdf,
)
from .channel import ChannelModel, ChannelParams
from .config import ExperimentConfig
from .errors import ConfigError, ConvergenceError, UnachievableTargetError
from .geometry import DiskRegion
from .linkbudget import ReceptionRule

_FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")

# Presets behind `reproduce figN`.  Values are plain SI strings fed through
# the ordinary config parser; flags still override them.
_FIG_PRESETS: dict[str, dict[str, str]] = {
    # free-diffusion PDF vs simulation, disk radius 3 mm (use --radius 8mm
    # for the second panel)
    "fig2": {
        "command": "pdf", "model": "free", "radius": "0.003",
        "diffusion": "1e-09", "time": "300.0", "molecules": "1.0",
    },
    # free-diffusion CDF over y in [1, 10], disk radius 1.8 m (2.25 m alt)
    "fig3": {
        "command": "cdf", "model": "free", "radius": "1.8",
        "diffusion": "1e-09", "time": "300.0", "molecules": "1.0",
        "y_min": "1.0", "y_max": "10.0", "y_points": "91",
    },
    # success probability vs molecule count at tau = 0.01/mm^2
    "fig4": {
        "command": "success", "model": "free", "radius": "0.0012",
        "diffusion": "1e-09", "time": "100.0", "tau": "10000.0",
        "target": "0.9", "sweep_param": "molecules",
        "sweep_values": "5:600:120",
    },
    # minimum molecule count vs disk radius at 90% success
    "fig5": {
        "command": "sweep", "model": "free", "diffusion": "1e-09",
        "time": "500.0", "tau": "5000000.0", "target": "0.9",
        "sweep_param": "radius", "sweep_values": "0.0011:0.0015:9",
    },
    # drift-diffusion PDF vs simulation, disk radius 2 m (4 m alt)
    "fig6": {
        "command": "pdf", "model": "drift", "radius": "2.0",
        "diffusion": "0.0001", "time": "300.0", "molecules": "1.0",
        "velocity": "0.006666666666666667",
    },
}


@dataclass
class TableResult:
    columns: list[str]
    rows: list[list]
    diagnostics: dict[str, Any]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molsig",
        description="Received-signal-strength distributions for molecular "
                    "links in a disk: analytic curves, Monte Carlo "
                    "validation, and link-budget tables.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--output", "-o", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--model", choices=("free", "drift"), default=None)
    common.add_argument("--radius", help="disk radius, e.g. 3mm or 0.003")
    common.add_argument("--diffusion", help="diffusion coefficient, e.g. 1e-5cm2/s")
    common.add_argument("--time", help="observation time in seconds")
    common.add_argument("--molecules", help="impulse intensity M")
    common.add_argument("--velocity", help="drift speed, e.g. 1mm/s")
    common.add_argument("--tau", help="reception threshold, e.g. 0.01/mm2")
    common.add_argument("--target", help="required success probability")
    common.add_argument("--n-samples", dest="n_samples", help="Monte Carlo sample count")
    common.add_argument("--seed", help="Monte Carlo seed")
    common.add_argument("--bins", dest="n_bins", help="histogram bin count")
    common.add_argument("--backend", choices=("numba", "numpy"), default=None)

    yrange = argparse.ArgumentParser(add_help=False)
    yrange.add_argument("--y-min", dest="y_min", help="table lower signal bound")
    yrange.add_argument("--y-max", dest="y_max", help="table upper signal bound")
    yrange.add_argument("--y-points", dest="y_points", help="table row count")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("pdf", parents=[common],
                   help="analytic + empirical density table")
    sub.add_parser("cdf", parents=[common, yrange],
                   help="series + quadrature + empirical CDF table")
    sim = sub.add_parser("simulate", parents=[common],
                         help="raw Monte Carlo histogram / ECDF dump")
    sim.add_argument("--table", choices=("bins", "ecdf"), default="bins",
                     help="emit histogram bins or the full ECDF")
    suc = sub.add_parser("success", parents=[common],
                         help="success probability vs molecule count")
    suc.add_argument("--m-min", dest="m_min", help="first molecule count")
    suc.add_argument("--m-max", dest="m_max", help="last molecule count")
    suc.add_argument("--m-points", dest="m_points", help="molecule grid size")
    sub.add_parser("threshold", parents=[common],
                   help="minimum molecule count for the target probability")
    swp = sub.add_parser("sweep", parents=[common],
                         help="minimum molecule count per disk radius")
    swp.add_argument("--radii", help="radius list or start:stop:count, e.g. 1.1mm:1.5mm:9")
    rep = sub.add_parser("reproduce", parents=[common, yrange],
                         help="rebuild a reference figure's data table")
    rep.add_argument("figure", choices=_FIGURES)
    return parser


_FLAG_KEYS = (
    "model", "radius", "diffusion", "time", "molecules", "velocity", "tau",
    "target", "n_samples", "seed", "n_bins", "format", "backend",
    "y_min", "y_max", "y_points",
)


def _flag_values(args: argparse.Namespace) -> dict[str, str]:
    out = {}
    for key in _FLAG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = str(value)
    return out


def _resolve(args: argparse.Namespace) -> ExperimentConfig:
    if args.command == "reproduce":
        preset = dict(_FIG_PRESETS[args.figure])
        command = preset.pop("command")
    else:
        preset = {}
        command = args.command

    file_values = dict(preset)
    if args.config:
        file_values.update(config_mod.read_config_file(args.config))

    flags = _flag_values(args)
    if command == "success":
        given = [getattr(args, k, None) for k in ("m_min", "m_max", "m_points")]
        if any(v is not None for v in given):
            m_min = given[0] if given[0] is not None else "5"
            m_max = given[1] if given[1] is not None else "600"
            m_points = given[2] if given[2] is not None else "120"
            flags["sweep_param"] = "molecules"
            flags["sweep_values"] = f"{m_min}:{m_max}:{m_points}"
        elif "sweep_values" not in file_values:
            file_values["sweep_param"] = "molecules"
            file_values["sweep_values"] = "5:600:120"
    if command == "sweep" and getattr(args, "radii", None) is not None:
        flags["sweep_param"] = "radius"
        flags["sweep_values"] = args.radii

    cfg = config_mod.resolve_config(command, file_values, flags)
    cfg.output_path = args.output
    cfg.backend = resolve_backend(cfg.backend)

    if command in ("success", "threshold", "sweep") and cfg.tau is None:
        raise ConfigError(f"{command} needs a reception threshold (--tau)")
    if command == "success" and cfg.sweep_param != "molecules":
        raise ConfigError("success sweeps the molecule count; set sweep_param = molecules")
    if command == "sweep":
        if cfg.sweep_param is None:
            raise ConfigError("sweep needs radii (--radii or sweep_values)")
        if cfg.sweep_param != "radius":
            raise ConfigError("sweep varies the radius; set sweep_param = radius")
        if any(b < a for a, b in zip(cfg.sweep_values, cfg.sweep_values[1:])):
            raise ConfigError("radii must be non-decreasing")
    if command == "cdf" and cfg.model is not ChannelModel.FREE_DIFFUSION:
        raise ConfigError("cdf tables are available for the free-diffusion model")
    return cfg


def _channel_params(cfg: ExperimentConfig) -> ChannelParams:
    return ChannelParams(
        model=cfg.model,
        molecules=cfg.molecules,
        diffusion_coeff=cfg.diffusion_coeff,
        time=cfg.time,
        drift_velocity=cfg.drift_velocity,
    )


def _simulate(cfg: ExperimentConfig, params: ChannelParams, region: DiskRegion):
    return montecarlo.simulate(params, region, cfg.n_samples, cfg.seed,
                               cfg.n_bins, backend=cfg.backend)


def _run_pdf(cfg: ExperimentConfig) -> TableResult:
    params = _channel_params(cfg)
    region = DiskRegion(cfg.radius)
    dist = SignalDistribution.from_channel(params, region)
    emp = _simulate(cfg, params, region)

    centers = 0.5 * (emp.bin_edges[:-1] + emp.bin_edges[1:])
    widths = np.diff(emp.bin_edges)
    pdf_emp = emp.bin_probabilities / widths

    diagnostics: dict[str, Any] = {"y_min": dist.y_min, "y_max": dist.y_max}
    if cfg.model is ChannelModel.FREE_DIFFUSION:
        pdf_an = free_pdf(centers, dist)
        diagnostics["ks"] = montecarlo.ks_statistic(
            emp, lambda y: free_cdf_quadrature(y, dist))
        diagnostics["l1"] = montecarlo.l1_distance(emp, lambda y: free_pdf(y, dist))
        columns = ["y", "pdf_analytic", "pdf_empirical"]
        rows = [[y, a, e] for y, a, e in zip(centers, pdf_an, pdf_emp)]
    else:
        pdf_two = drift_pdf(centers, dist, DriftMode.TWO_BRANCH)
        pdf_single = drift_pdf(centers, dist, DriftMode.PAPER_SINGLE_BRANCH)
        diagnostics["ks"] = montecarlo.ks_statistic(
            emp, lambda y: drift_cdf(y, dist, DriftMode.TWO_BRANCH))
        diagnostics["l1"] = montecarlo.l1_distance(
            emp, lambda y: drift_pdf(y, dist, DriftMode.TWO_BRANCH))
        columns = ["y", "pdf_analytic", "pdf_single_branch", "pdf_empirical"]
        rows = [[y, a, s, e]
                for y, a, s, e in zip(centers, pdf_two, pdf_single, pdf_emp)]
    return TableResult(columns, rows, diagnostics)


def _run_cdf(cfg: ExperimentConfig) -> TableResult:
    params = _channel_params(cfg)
    region = DiskRegion(cfg.radius)
    dist = SignalDistribution.from_channel(params, region)
    if cfg.y_min is None:
        cfg.y_min = dist.y_max / 1000.0
        cfg.y_max = dist.y_max
    ys = np.linspace(cfg.y_min, cfg.y_max, cfg.y_points)

    emp = _simulate(cfg, params, region)
    quad = free_cdf_quadrature(ys, dist)
    ecdf = emp.ecdf(ys)

    rows = []
    max_gap = 0.0
    n_converged = 0
    for y, q, e in zip(ys, quad, ecdf):
        series = free_cdf_series(y, dist)
        if series.status is SeriesStatus.CONVERGED:
            n_converged += 1
            max_gap = max(max_gap, abs(series.value - q))
        rows.append([y, series.value, series.status.value, series.terms, q, e])

    diagnostics = {
        "ks": montecarlo.ks_statistic(emp, lambda y: free_cdf_quadrature(y, dist)),
        "series_converged_rows": n_converged,
        "max_series_vs_quadrature": max_gap,
        "y_min": dist.y_min,
        "y_max": dist.y_max,
    }
    columns = ["y", "cdf_series", "series_status", "series_terms",
               "cdf_quadrature", "cdf_empirical"]
    return TableResult(columns, rows, diagnostics)


def _run_simulate(cfg: ExperimentConfig, table: str) -> TableResult:
    params = _channel_params(cfg)
    region = DiskRegion(cfg.radius)
    emp = _simulate(cfg, params, region)
    diagnostics = {
        "sample_count": emp.sample_count,
        "seed": emp.seed,
        "y_min": float(emp.bin_edges[0]),
        "y_max": float(emp.bin_edges[-1]),
    }
    if table == "ecdf":
        columns = ["y", "cumulative_probability"]
        rows = [[y, p] for y, p in zip(emp.ecdf_values, emp.ecdf_probabilities)]
    else:
        columns = ["bin_lo", "bin_hi", "count", "probability"]
        rows = [
            [lo, hi, int(round(p * emp.sample_count)), p]
            for lo, hi, p in zip(emp.bin_edges[:-1], emp.bin_edges[1:],
                                 emp.bin_probabilities)
        ]
    return TableResult(columns, rows, diagnostics)


def _run_success(cfg: ExperimentConfig) -> TableResult:
    params = _channel_params(cfg)
    region = DiskRegion(cfg.radius)
    rule = ReceptionRule(threshold=cfg.tau, target_probability=cfg.target_probability)

    rows = []
    for m in cfg.sweep_values:
        dist = SignalDistribution.from_channel(replace(params, molecules=m), region)
        rows.append([m, linkbudget.success_probability(rule, dist)])

    diagnostics: dict[str, Any] = {"tau": cfg.tau, "target": cfg.target_probability}
    try:
        m_star = linkbudget.threshold_molecules(rule, params, region)
        dist = SignalDistribution.from_channel(replace(params, molecules=m_star), region)
        diagnostics["m_star"] = m_star
        diagnostics["m_star_rounded"] = int(round(m_star))
        diagnostics["success_at_m_star"] = linkbudget.success_probability(rule, dist)
    except UnachievableTargetError as exc:
        diagnostics["m_star"] = None
        diagnostics["m_star_error"] = str(exc)
    return TableResult(["molecules", "success_probability"], rows, diagnostics)


def _run_threshold(cfg: ExperimentConfig) -> TableResult:
    params = _channel_params(cfg)
    region = DiskRegion(cfg.radius)
    rule = ReceptionRule(threshold=cfg.tau, target_probability=cfg.target_probability)
    m_star = linkbudget.threshold_molecules(rule, params, region)
    dist = SignalDistribution.from_channel(replace(params, molecules=m_star), region)
    p = linkbudget.success_probability(rule, dist)
    diagnostics = {
        "tau": cfg.tau,
        "target": cfg.target_probability,
        "m_star_rounded": int(round(m_star)),
    }
    return TableResult(["molecules", "success_probability"], [[m_star, p]], diagnostics)


def _run_sweep(cfg: ExperimentConfig) -> TableResult:
    params = _channel_params(cfg)
    rule = ReceptionRule(threshold=cfg.tau, target_probability=cfg.target_probability)
    points = linkbudget.radius_sweep(rule, params, cfg.sweep_values)
    rows = [[p.radius, p.molecules, p.error] for p in points]
    n_failed = sum(1 for p in points if p.error is not None)
    diagnostics = {"tau": cfg.tau, "target": cfg.target_probability,
                   "failed_radii": n_failed}
    return TableResult(["radius", "m_star", "error"], rows, diagnostics)


def _dispatch(args: argparse.Namespace) -> tuple[ExperimentConfig, TableResult]:
    cfg = _resolve(args)
    if cfg.command == "pdf":
        return cfg, _run_pdf(cfg)
    if cfg.command == "cdf":
        return cfg, _run_cdf(cfg)
    if cfg.command == "simulate":
        return cfg, _run_simulate(cfg, getattr(args, "table", "bins"))
    if cfg.command == "success":
        return cfg, _run_success(cfg)
    if cfg.command == "threshold":
        return cfg, _run_threshold(cfg)
    if cfg.command == "sweep":
        return cfg, _run_sweep(cfg)
    raise ConfigError(f"unknown command {cfg.command!r}")  # pragma: no cover


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _jsonable(v):
    if v is None or isinstance(v, (str, int)):
        return v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if np.isfinite(v) else repr(v)
    return v


def _write_csv(stream, flat: dict[str, str], result: TableResult) -> None:
    for key, value in flat.items():
        stream.write(f"# {key} = {value}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_fmt_cell(v) for v in row])


def _write_json(stream, flat: dict[str, str], result: TableResult) -> None:
    payload = {
        "config": flat,
        "columns": result.columns,
        "rows": [[_jsonable(v) for v in row] for row in result.rows],
        "diagnostics": {k: _jsonable(v) for k, v in result.diagnostics.items()},
    }
    json.dump(payload, stream, indent=2)
    stream.write("\n")


def _emit(cfg: ExperimentConfig, result: TableResult) -> None:
    flat = config_mod.to_flat_dict(cfg)
    writer = _write_json if cfg.output_format == "json" else _write_csv
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as stream:
            writer(stream, flat, result)
    else:
        writer(sys.stdout, flat, result)


def _fail(code: int, kind: str, exc: Exception) -> int:
    record = {"error": {"type": kind, "message": str(exc), "exit_code": code}}
    extra = {k: v for k, v in vars(exc).items()
             if k in ("residual", "target", "bound") and v is not None}
    if extra:
        record["error"].update(extra)
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, result = _dispatch(args)
        _emit(cfg, result)
        return 0
    except ConfigError as exc:
        return _fail(2, "config-error", exc)
    except ConvergenceError as exc:
        return _fail(3, "non-convergence", exc)
    except UnachievableTargetError as exc:
        return _fail(4, "unachievable-target", exc)
    except (ValueError, OverflowError) as exc:
        return _fail(2, "config-error", exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
