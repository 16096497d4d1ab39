"""Declarative scenario runner and the ``polarispec`` command.

A scenario is one JSON document::

    {
      "cavity":  {"omega_ph": 0.0, "kappa_L": 0.05, "kappa_R": 0.05},
      "model":   {"kind": "tls", "n_emitters": 1.0, "g": 2.0,
                  "omega_exc": 0.0, "beta": "inf", "gamma": 0.3},
      "grid":    {"omega_min": -4.0, "omega_max": 4.0, "n_points": 4001},
      "method":  "harmonic",
      "outputs": [{"csv": "spectra.csv", "svg": "spectra.svg"}]
    }

Model kinds: ``tls``, ``disordered_tls`` (adds a ``disorder`` object),
``vibronic``, ``multilevel`` (exactly three levels), ``tabulated_chi``
(``path`` to a chi CSV, or null for an empty cavity).  ``method`` is
either the string ``"harmonic"`` or ``{"kind": "finite_n", "n_modes": M}``
with an optional ``gamma_mode``.  ``beta`` may be the string ``"inf"``
since JSON has no infinity literal.  Unknown keys anywhere are hard
errors: a typo in a physics parameter must not silently fall back to a
default.

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 file I/O error.
"""

from __future__ import annotations

import argparse
import copy
import csv as _csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import fileio
from .bathmap import discretize_bath, effective_temperature, spectral_density_from_chi
from .core import (
    ComplexSpectrum,
    FrequencyGrid,
    NumericalError,
    TraSpectra,
    ValidationError,
    local_maxima,
    make_grid,
)
from .spectra import (
    CavityParams,
    green_finite_n,
    photon_green_function,
    spectra_from_green,
    spectra_harmonic,
)
from .susceptibility import (
    DisorderSpec,
    MultilevelModel,
    TlsEnsemble,
    VibronicModel,
    chi_disordered,
    chi_three_level,
    chi_tls_thermal,
    chi_vibronic,
    three_level_transitions,
    tls_transitions,
    vibronic_transitions,
)

__all__ = [
    "ConfigError",
    "DisorderedTls",
    "TabulatedChi",
    "MethodSpec",
    "OutputSpec",
    "Scenario",
    "Sweep",
    "parse_scenario",
    "parse_sweep",
    "scenario_to_config",
    "preset_config",
    "preset_names",
    "model_susceptibility",
    "model_transitions",
    "run_scenario",
    "run_sweep",
    "export_bundle",
    "peak_splitting",
    "main",
]


class ConfigError(ValidationError):
    """Configuration document is invalid; message names the offending key."""


# ---------------------------------------------------------------------------
# Model wrappers for the two kinds that are not bare susceptibility models


@dataclass(frozen=True)
class DisorderedTls:
    base: TlsEnsemble
    disorder: DisorderSpec


@dataclass(frozen=True)
class TabulatedChi:
    """Susceptibility read from a CSV file; ``path=None`` means chi = 0."""

    path: str | None


@dataclass(frozen=True)
class MethodSpec:
    kind: str
    n_modes: int | None = None
    gamma_mode: float | None = None


@dataclass(frozen=True)
class OutputSpec:
    csv: str | None = None
    svg: str | None = None


@dataclass(frozen=True)
class Scenario:
    cavity: CavityParams
    model: object
    model_kind: str
    grid: FrequencyGrid
    method: MethodSpec
    outputs: tuple[OutputSpec, ...] = ()


@dataclass(frozen=True)
class Sweep:
    base: Scenario
    base_config: dict
    parameter: str
    values: tuple


# ---------------------------------------------------------------------------
# Strict config parsing


def _check_keys(d: dict, path: str, required: tuple, optional: tuple = ()):
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    for k in d:
        if k not in required and k not in optional:
            raise ConfigError(f"{path}.{k}: unknown key")
    for k in required:
        if k not in d:
            raise ConfigError(f"{path}.{k}: missing required key")


def _number(d: dict, path: str, key: str, default=None):
    if key not in d:
        if default is not None:
            return default
        raise ConfigError(f"{path}.{key}: missing required key")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {v!r}")
    return float(v)


def _integer(d: dict, path: str, key: str):
    v = d.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {v!r}")
    return v


def _beta(d: dict, path: str, key: str) -> float:
    v = d.get(key)
    if v == "inf":
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(
            f"{path}.{key}: expected a number or the string \"inf\", got {v!r}"
        )
    return float(v)


def _parse_model(cfg: dict) -> tuple[object, str]:
    _check_keys_any = cfg.get("kind")
    if _check_keys_any is None:
        raise ConfigError("model.kind: missing required key")
    kind = cfg["kind"]
    try:
        if kind == "tls":
            _check_keys(
                cfg, "model", ("kind", "n_emitters", "g", "omega_exc", "beta", "gamma")
            )
            return (
                TlsEnsemble(
                    _number(cfg, "model", "n_emitters"),
                    _number(cfg, "model", "g"),
                    _number(cfg, "model", "omega_exc"),
                    _beta(cfg, "model", "beta"),
                    _number(cfg, "model", "gamma"),
                ),
                kind,
            )
        if kind == "disordered_tls":
            _check_keys(
                cfg,
                "model",
                ("kind", "n_emitters", "g", "omega_exc", "gamma", "disorder"),
            )
            dis = cfg["disorder"]
            _check_keys(dis, "model.disorder", ("kind", "center", "sigma"))
            if dis["kind"] not in ("gaussian", "lorentzian"):
                raise ConfigError(
                    "model.disorder.kind: must be 'gaussian' or 'lorentzian'"
                )
            return (
                DisorderedTls(
                    TlsEnsemble(
                        _number(cfg, "model", "n_emitters"),
                        _number(cfg, "model", "g"),
                        _number(cfg, "model", "omega_exc"),
                        math.inf,
                        _number(cfg, "model", "gamma"),
                    ),
                    DisorderSpec(
                        dis["kind"],
                        _number(dis, "model.disorder", "center"),
                        _number(dis, "model.disorder", "sigma"),
                    ),
                ),
                kind,
            )
        if kind == "vibronic":
            _check_keys(
                cfg,
                "model",
                ("kind", "n_emitters", "g", "omega_exc", "omega_v", "huang_rhys", "gamma"),
                ("m_max",),
            )
            m_max = None
            if "m_max" in cfg:
                m_max = _integer(cfg, "model", "m_max")
            return (
                VibronicModel(
                    _number(cfg, "model", "n_emitters"),
                    _number(cfg, "model", "g"),
                    _number(cfg, "model", "omega_exc"),
                    _number(cfg, "model", "omega_v"),
                    _number(cfg, "model", "huang_rhys"),
                    _number(cfg, "model", "gamma"),
                    m_max,
                ),
                kind,
            )
        if kind == "multilevel":
            _check_keys(
                cfg,
                "model",
                ("kind", "levels", "dipoles", "n_emitters", "g_scale", "gamma"),
            )
            levels = cfg["levels"]
            dipoles = cfg["dipoles"]
            if not isinstance(levels, list) or not all(
                isinstance(x, list) and len(x) == 2 for x in levels
            ):
                raise ConfigError(
                    "model.levels: expected a list of [omega, population] pairs"
                )
            if not isinstance(dipoles, list) or not all(
                isinstance(x, list) and len(x) == 3 for x in dipoles
            ):
                raise ConfigError(
                    "model.dipoles: expected a list of [low, high, amplitude] triples"
                )
            return (
                MultilevelModel(
                    levels,
                    dipoles,
                    _number(cfg, "model", "n_emitters"),
                    _number(cfg, "model", "g_scale"),
                    _number(cfg, "model", "gamma"),
                ),
                kind,
            )
        if kind == "tabulated_chi":
            _check_keys(cfg, "model", ("kind", "path"))
            path = cfg["path"]
            if path is not None and not isinstance(path, str):
                raise ConfigError("model.path: expected a string or null")
            return TabulatedChi(path), kind
    except ValidationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"model: {exc}") from exc
    raise ConfigError(f"model.kind: unknown model kind {kind!r}")


def _parse_method(cfg) -> MethodSpec:
    if cfg == "harmonic" or cfg == {"kind": "harmonic"}:
        return MethodSpec("harmonic")
    if isinstance(cfg, dict):
        _check_keys(cfg, "method", ("kind",), ("n_modes", "gamma_mode"))
        if cfg.get("kind") == "finite_n":
            if "n_modes" not in cfg:
                raise ConfigError("method.n_modes: missing required key")
            n_modes = _integer(cfg, "method", "n_modes")
            if n_modes < 1:
                raise ConfigError("method.n_modes: must be >= 1")
            gamma_mode = None
            if "gamma_mode" in cfg:
                gamma_mode = _number(cfg, "method", "gamma_mode")
            return MethodSpec("finite_n", n_modes, gamma_mode)
    raise ConfigError(
        "method: expected \"harmonic\" or {\"kind\": \"finite_n\", \"n_modes\": M}"
    )


def parse_scenario(cfg: dict) -> Scenario:
    """Validate a scenario configuration dict into a runnable Scenario."""
    _check_keys(cfg, "scenario", ("cavity", "model", "grid", "method"), ("outputs",))
    cav_cfg = cfg["cavity"]
    _check_keys(cav_cfg, "cavity", ("omega_ph", "kappa_L", "kappa_R"))
    try:
        cavity = CavityParams(
            _number(cav_cfg, "cavity", "omega_ph"),
            _number(cav_cfg, "cavity", "kappa_L"),
            _number(cav_cfg, "cavity", "kappa_R"),
        )
    except ValidationError as exc:
        raise ConfigError(f"cavity: {exc}") from exc
    model, kind = _parse_model(cfg["model"])
    grid_cfg = cfg["grid"]
    _check_keys(grid_cfg, "grid", ("omega_min", "omega_max", "n_points"))
    try:
        grid = make_grid(
            _number(grid_cfg, "grid", "omega_min"),
            _number(grid_cfg, "grid", "omega_max"),
            _integer(grid_cfg, "grid", "n_points"),
        )
    except ValidationError as exc:
        raise ConfigError(f"grid: {exc}") from exc
    method = _parse_method(cfg["method"])
    outputs = []
    for i, out in enumerate(cfg.get("outputs", [])):
        _check_keys(out, f"outputs[{i}]", (), ("csv", "svg"))
        if not out:
            raise ConfigError(f"outputs[{i}]: needs a csv or svg path")
        outputs.append(OutputSpec(out.get("csv"), out.get("svg")))
    return Scenario(cavity, model, kind, grid, method, tuple(outputs))


def parse_sweep(cfg: dict) -> Sweep:
    """Validate a sweep configuration: base scenario, dotted path, values."""
    _check_keys(cfg, "sweep", ("base", "parameter", "values"))
    base_cfg = cfg["base"]
    base = parse_scenario(base_cfg)
    parameter = cfg["parameter"]
    values = cfg["values"]
    if not isinstance(parameter, str) or not parameter:
        raise ConfigError("sweep.parameter: expected a dotted path string")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values: expected a nonempty list")
    for v in values:
        _apply_parameter(copy.deepcopy(base_cfg), parameter, v)  # resolvable?
    return Sweep(base, copy.deepcopy(base_cfg), parameter, tuple(values))


def _apply_parameter(cfg: dict, parameter: str, value) -> dict:
    if parameter == "model.populations":
        if cfg.get("model", {}).get("kind") != "multilevel":
            raise ConfigError(
                "sweep.parameter: model.populations needs a multilevel model"
            )
        levels = cfg["model"]["levels"]
        if not isinstance(value, list) or len(value) != len(levels):
            raise ConfigError(
                "sweep.values: each populations value needs one entry per level"
            )
        for lv, p in zip(levels, value):
            lv[1] = p
        return cfg
    keys = parameter.split(".")
    node = cfg
    for k in keys[:-1]:
        if not isinstance(node, dict) or k not in node:
            raise ConfigError(f"sweep.parameter: {parameter!r} does not resolve")
        node = node[k]
    if not isinstance(node, dict) or keys[-1] not in node:
        raise ConfigError(f"sweep.parameter: {parameter!r} does not resolve")
    node[keys[-1]] = value
    return cfg


def scenario_to_config(s: Scenario) -> dict:
    """Canonical configuration dict of a scenario (JSON-serializable)."""
    m = s.model
    if s.model_kind == "tls":
        model = {
            "kind": "tls",
            "n_emitters": m.n_emitters,
            "g": m.g,
            "omega_exc": m.omega_exc,
            "beta": "inf" if math.isinf(m.beta) else m.beta,
            "gamma": m.gamma,
        }
    elif s.model_kind == "disordered_tls":
        model = {
            "kind": "disordered_tls",
            "n_emitters": m.base.n_emitters,
            "g": m.base.g,
            "omega_exc": m.base.omega_exc,
            "gamma": m.base.gamma,
            "disorder": {
                "kind": m.disorder.kind,
                "center": m.disorder.center,
                "sigma": m.disorder.sigma,
            },
        }
    elif s.model_kind == "vibronic":
        model = {
            "kind": "vibronic",
            "n_emitters": m.n_emitters,
            "g": m.g,
            "omega_exc": m.omega_exc,
            "omega_v": m.omega_v,
            "huang_rhys": m.huang_rhys,
            "gamma": m.gamma,
        }
        if m.m_max is not None:
            model["m_max"] = m.m_max
    elif s.model_kind == "multilevel":
        model = {
            "kind": "multilevel",
            "levels": [[w, p] for w, p in m.levels],
            "dipoles": [[y, z, a] for y, z, a in m.dipoles],
            "n_emitters": m.n_emitters,
            "g_scale": m.g_scale,
            "gamma": m.gamma,
        }
    else:
        model = {"kind": "tabulated_chi", "path": m.path}
    method: object
    if s.method.kind == "harmonic":
        method = "harmonic"
    else:
        method = {"kind": "finite_n", "n_modes": s.method.n_modes}
        if s.method.gamma_mode is not None:
            method["gamma_mode"] = s.method.gamma_mode
    cfg = {
        "cavity": {
            "omega_ph": s.cavity.omega_ph,
            "kappa_L": s.cavity.kappa_L,
            "kappa_R": s.cavity.kappa_R,
        },
        "model": model,
        "grid": {
            "omega_min": s.grid.omega_min,
            "omega_max": s.grid.omega_max,
            "n_points": s.grid.n_points,
        },
        "method": method,
    }
    if s.outputs:
        cfg["outputs"] = [
            {k: v for k, v in (("csv", o.csv), ("svg", o.svg)) if v is not None}
            for o in s.outputs
        ]
    return cfg


# ---------------------------------------------------------------------------
# Model dispatch


def model_susceptibility(model, grid: FrequencyGrid) -> ComplexSpectrum:
    """Evaluate the model's susceptibility on a grid."""
    if isinstance(model, TlsEnsemble):
        return chi_tls_thermal(model, grid)
    if isinstance(model, DisorderedTls):
        return chi_disordered(model.base, model.disorder, grid)
    if isinstance(model, VibronicModel):
        return chi_vibronic(model, grid)
    if isinstance(model, MultilevelModel):
        return chi_three_level(model, grid)
    if isinstance(model, TabulatedChi):
        if model.path is None:
            return ComplexSpectrum(grid, np.zeros(grid.n_points, dtype=complex))
        chi = fileio.read_chi_csv(model.path)
        if chi.grid == grid:
            return chi
        if grid.omega_min < chi.grid.omega_min or grid.omega_max > chi.grid.omega_max:
            raise ValidationError(
                "scenario grid extends beyond the tabulated susceptibility range"
            )
        re = np.interp(grid.points, chi.grid.points, chi.values.real)
        im = np.interp(grid.points, chi.grid.points, chi.values.imag)
        return ComplexSpectrum(grid, re + 1j * im)
    raise ValidationError(f"unknown model object {type(model).__name__}")


def model_transitions(model):
    """Transition set of a model, or None for non-transition-based models."""
    if isinstance(model, TlsEnsemble):
        return tls_transitions(model)
    if isinstance(model, VibronicModel):
        return vibronic_transitions(model)
    if isinstance(model, MultilevelModel):
        return three_level_transitions(model)
    return None


# ---------------------------------------------------------------------------
# Runners


def _compute(s: Scenario) -> TraSpectra:
    chi = model_susceptibility(s.model, s.grid)
    if s.method.kind == "harmonic":
        return spectra_harmonic(chi, s.cavity)
    pos = s.grid.points > 0
    n_pos = int(pos.sum())
    if n_pos < 2:
        raise ValidationError(
            "finite_n needs positive frequencies in the scenario grid"
        )
    pos_grid = make_grid(
        float(s.grid.points[pos][0]), float(s.grid.points[pos][-1]), n_pos
    )
    J = spectral_density_from_chi(model_susceptibility(s.model, pos_grid))
    bath = discretize_bath(J, s.method.n_modes, s.method.gamma_mode)
    return spectra_from_green(green_finite_n(bath, s.cavity, s.grid), s.cavity)


def run_scenario(
    s: Scenario, out_csv: str | None = None, out_svg: str | None = None
) -> TraSpectra:
    """Compute the scenario's spectra and write its configured outputs."""
    tra = _compute(s)
    for out in s.outputs:
        if out.csv:
            fileio.write_tra_csv(out.csv, tra)
        if out.svg:
            fileio.write_tra_svg(out.svg, tra)
    if out_csv:
        fileio.write_tra_csv(out_csv, tra)
    if out_svg:
        fileio.write_tra_svg(out_svg, tra)
    return tra


def peak_splitting(tra: TraSpectra) -> float:
    """Distance between outermost transmission maxima (0 for single peak)."""
    peaks = local_maxima(tra.transmission)
    if len(peaks) < 2:
        return 0.0
    return peaks[-1][0] - peaks[0][0]


def run_sweep(sw: Sweep, outdir: str = ".") -> list[TraSpectra]:
    """Run the base scenario once per value; write per-value and summary CSVs.

    Values are independent of each other and could run in parallel; the
    summary rows are emitted in input order either way.
    """
    os.makedirs(outdir, exist_ok=True)
    results = []
    rows = []
    for i, value in enumerate(sw.values):
        cfg = _apply_parameter(copy.deepcopy(sw.base_config), sw.parameter, value)
        cfg.pop("outputs", None)
        scenario = parse_scenario(cfg)
        tra = _compute(scenario)
        results.append(tra)
        fileio.write_tra_csv(os.path.join(outdir, f"sweep_{i:03d}.csv"), tra)
        label = value if isinstance(value, str) else json.dumps(value)
        rows.append((label, peak_splitting(tra)))
    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["value", "peak_splitting"])
    for label, split in rows:
        writer.writerow([label, "%.16e" % split])
    fileio._atomic_write_text(os.path.join(outdir, "summary.csv"), buf.getvalue())
    return results


def export_bundle(s: Scenario, outdir: str) -> list[str]:
    """Write chi, coupling density, effective temperature and spectra CSVs."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    chi = model_susceptibility(s.model, s.grid)
    path = os.path.join(outdir, "chi.csv")
    fileio.write_chi_csv(path, chi)
    written.append(path)

    path = os.path.join(outdir, "j_eff.csv")
    fileio.write_jeff_csv(path, spectral_density_from_chi(chi))
    written.append(path)

    ts = model_transitions(s.model)
    pos = s.grid.points > 0
    if ts is not None and pos.sum() >= 2:
        pos_grid = make_grid(
            float(s.grid.points[pos][0]), float(s.grid.points[pos][-1]), int(pos.sum())
        )
        beta_eff = effective_temperature(ts, pos_grid)
        path = os.path.join(outdir, "beta_eff.csv")
        fileio.write_beta_eff_csv(path, beta_eff)
        written.append(path)
    else:
        print(
            "note: beta_eff.csv omitted (model has no transition data)",
            file=sys.stderr,
        )

    tra = _compute(s)
    path = os.path.join(outdir, "spectra.csv")
    fileio.write_tra_csv(path, tra)
    written.append(path)
    return written


# ---------------------------------------------------------------------------
# Presets


def _fig2a() -> dict:
    return {
        "description": "resonant two-level ensemble, collective coupling 2.0, "
        "zero temperature",
        "cavity": {"omega_ph": 0.0, "kappa_L": 0.05, "kappa_R": 0.05},
        "model": {
            "kind": "tls",
            "n_emitters": 1.0,
            "g": 2.0,
            "omega_exc": 0.0,
            "beta": "inf",
            "gamma": 0.3,
        },
        "grid": {"omega_min": -4.0, "omega_max": 4.0, "n_points": 4001},
        "method": "harmonic",
    }


def _fig2b() -> dict:
    base = _fig2a()
    del base["description"]
    # detuned from zero so the thermal factor actually varies with beta
    base["model"]["omega_exc"] = 1.0
    base["cavity"]["omega_ph"] = 1.0
    base["grid"] = {"omega_min": -4.0, "omega_max": 6.0, "n_points": 5001}
    return {
        "description": "temperature sweep of the resonant two-level ensemble: "
        "the peak splitting contracts as saturation sets in",
        "base": base,
        "parameter": "model.beta",
        "values": ["inf", 2.0, 1.0, 0.5, 0.25, 0.0],
    }


def _fig3(kind: str) -> dict:
    return {
        "description": f"{kind} energy disorder (width 1.0) across a "
        "two-level ensemble, collective coupling 1.5",
        "cavity": {"omega_ph": 0.0, "kappa_L": 0.05, "kappa_R": 0.05},
        "model": {
            "kind": "disordered_tls",
            "n_emitters": 1.0,
            "g": 1.5,
            "omega_exc": 0.0,
            "gamma": 0.1,
            "disorder": {"kind": kind, "center": 0.0, "sigma": 1.0},
        },
        "grid": {"omega_min": -5.0, "omega_max": 5.0, "n_points": 4001},
        "method": "harmonic",
    }


def _fig4() -> dict:
    return {
        "description": "vibronic progression (mode 0.3, displacement parameter 3) "
        "under collective coupling 1.0",
        "cavity": {"omega_ph": 0.0, "kappa_L": 0.05, "kappa_R": 0.05},
        "model": {
            "kind": "vibronic",
            "n_emitters": 1.0,
            "g": 1.0,
            "omega_exc": 0.0,
            "omega_v": 0.3,
            "huang_rhys": 3.0,
            "gamma": 0.1,
        },
        "grid": {"omega_min": -4.0, "omega_max": 4.0, "n_points": 4001},
        "method": "harmonic",
    }


def _fig5(populations, note) -> dict:
    return {
        "description": "three-level ensemble (gaps 1 and 2) with populations "
        f"{populations}: {note}",
        "cavity": {"omega_ph": 1.0, "kappa_L": 0.05, "kappa_R": 0.05},
        "model": {
            "kind": "multilevel",
            "levels": [[0.0, populations[0]], [1.0, populations[1]], [3.0, populations[2]]],
            "dipoles": [[1, 2, 1.0], [2, 3, 1.0], [1, 3, 1.0]],
            "n_emitters": 1.0,
            "g_scale": 1.0,
            "gamma": 0.3,
        },
        "grid": {"omega_min": -1.0, "omega_max": 5.0, "n_points": 4001},
        "method": "harmonic",
    }


def _empty_cavity() -> dict:
    return {
        "description": "bare cavity: zero susceptibility baseline",
        "cavity": {"omega_ph": 0.0, "kappa_L": 0.05, "kappa_R": 0.05},
        "model": {"kind": "tabulated_chi", "path": None},
        "grid": {"omega_min": -4.0, "omega_max": 4.0, "n_points": 4001},
        "method": "harmonic",
    }


_PRESETS = {
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3a": lambda: _fig3("gaussian"),
    "fig3b": lambda: _fig3("lorentzian"),
    "fig4": _fig4,
    "fig5a": lambda: _fig5((0.7, 0.2, 0.1), "four hybrid peaks"),
    "fig5b": lambda: _fig5((0.48, 0.48, 0.04), "one transition saturated, three peaks"),
    "fig5c": lambda: _fig5(
        (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), "fully saturated, bare-cavity response"
    ),
    "empty_cavity": _empty_cavity,
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def preset_config(name: str) -> dict:
    """Configuration dict of a bundled preset (description key removed)."""
    if name not in _PRESETS:
        raise ConfigError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}"
        )
    cfg = _PRESETS[name]()
    cfg.pop("description", None)
    return cfg


# ---------------------------------------------------------------------------
# Command-line entry point


def _load_config(args) -> dict:
    if args.preset and args.config:
        raise ConfigError("give either --config or --preset, not both")
    if args.preset:
        return preset_config(args.preset)
    if not args.config:
        raise ConfigError("one of --config or --preset is required")
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError:
        raise
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{args.config}: top level must be an object")
    return cfg


def _apply_grid_overrides(cfg: dict, args) -> dict:
    target = cfg["base"] if "base" in cfg else cfg
    grid = target.get("grid")
    if not isinstance(grid, dict):
        return cfg
    if args.points is not None:
        grid["n_points"] = args.points
    if args.omega_min is not None:
        grid["omega_min"] = args.omega_min
    if args.omega_max is not None:
        grid["omega_max"] = args.omega_max
    return cfg


def _add_common(p):
    p.add_argument("--config", help="path to a JSON configuration")
    p.add_argument("--preset", help="name of a bundled preset")
    p.add_argument("--points", type=int, help="override grid n_points")
    p.add_argument("--omega-min", type=float, help="override grid omega_min")
    p.add_argument("--omega-max", type=float, help="override grid omega_max")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="polarispec",
        description="Linear optical spectra of molecular microcavities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="run one scenario")
    _add_common(p_spec)
    p_spec.add_argument("--out", help="write the T/R/A table to this CSV path")
    p_spec.add_argument("--svg", help="write a line chart to this SVG path")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--outdir", default=".", help="output directory")

    p_bundle = sub.add_parser("bundle", help="export chi, densities and spectra")
    _add_common(p_bundle)
    p_bundle.add_argument("--outdir", required=True, help="output directory")

    args = parser.parse_args(argv)
    try:
        cfg = _apply_grid_overrides(_load_config(args), args)
        if args.command == "spectrum":
            if "base" in cfg:
                raise ConfigError(
                    "this configuration is a sweep; use `polarispec sweep`"
                )
            scenario = parse_scenario(cfg)
            tra = run_scenario(scenario, args.out, args.svg)
            sinks = (
                [o.csv for o in scenario.outputs if o.csv]
                + [o.svg for o in scenario.outputs if o.svg]
                + [p for p in (args.out, args.svg) if p]
            )
            if sinks:
                print("wrote: " + " ".join(sinks))
            else:
                print(
                    "no outputs configured; use --out/--svg or an outputs list",
                    file=sys.stderr,
                )
            peaks = local_maxima(tra.transmission)
            print(
                f"transmission maxima: {len(peaks)}"
                + (
                    " at "
                    + " ".join(f"{f:+.6g}" for f, _ in peaks[:8])
                    if peaks
                    else ""
                )
            )
        elif args.command == "sweep":
            if "base" not in cfg:
                raise ConfigError(
                    "sweep configuration needs top-level keys base/parameter/values"
                )
            sweep = parse_sweep(cfg)
            run_sweep(sweep, args.outdir)
            print(f"wrote {len(sweep.values)} spectra and summary.csv to {args.outdir}")
        else:
            if "base" in cfg:
                raise ConfigError("bundle takes a scenario, not a sweep")
            scenario = parse_scenario(cfg)
            written = export_bundle(scenario, args.outdir)
            print("wrote: " + " ".join(written))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
