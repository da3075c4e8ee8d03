"""Strict-schema run configuration.

One YAML document drives every subcommand. Unknown keys are rejected, every
validation failure names the offending key and the violated constraint, and
all defaults live in the table below so runs are reproducible from the
config file alone.

Defaults filled when omitted:
    grid.time.dt          0.01 / cavity.omega_c
    grid.frequency.eta    1e-3 * max|molecule.coupling| (1e-6 if uncoupled)
    grid.frequency.n_points  2001
    run.backend           auxiliary
    run.rwa               true for compare, false otherwise
    run.n_max             4
    ensemble.n_molecules  1
    disorder.kind         none
    disorder.gamma        1e-4
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import yaml

from .errors import ConfigError
from .model import (
    CavityMode,
    DisorderSpec,
    DrivePulse,
    EnsembleSpec,
    MolecularModel,
    TimeGrid,
    two_level,
)
from .spectra import FrequencyGrid

MODES = ("dynamics", "exact", "compare", "spectrum", "disorder-scan", "sweep")


def _require_mapping(node, path):
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected a mapping of keys")
    return node


def _check_keys(node, path, allowed):
    unknown = set(node) - set(allowed)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{path}.{key}: unknown key (allowed: {', '.join(sorted(allowed))})")


def _get_number(node, path, key, default=None, required=False):
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}: required key missing")
        return default
    val = node[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {val!r}")
    return float(val)


def _get_int(node, path, key, default=None, required=False):
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}: required key missing")
        return default
    val = node[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {val!r}")
    return val


def _get_bool(node, path, key, default):
    if key not in node:
        return default
    val = node[key]
    if not isinstance(val, bool):
        raise ConfigError(f"{path}.{key}: expected true/false, got {val!r}")
    return val


def _get_str(node, path, key, default=None, required=False, choices=None):
    if key not in node:
        if required:
            raise ConfigError(f"{path}.{key}: required key missing")
        return default
    val = node[key]
    if not isinstance(val, str):
        raise ConfigError(f"{path}.{key}: expected a string, got {val!r}")
    if choices and val not in choices:
        raise ConfigError(f"{path}.{key}: must be one of {', '.join(choices)}")
    return val


def _parse_matrix(node, path):
    """Real entries as numbers, complex entries as [re, im] pairs."""
    if not isinstance(node, list) or not all(isinstance(r, list) for r in node):
        raise ConfigError(f"{path}: expected a list of rows")

    def entry(v, where):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return complex(v)
        if (
            isinstance(v, list)
            and len(v) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
        ):
            return complex(v[0], v[1])
        raise ConfigError(f"{where}: matrix entries are numbers or [re, im] pairs")

    rows = [[entry(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(node)]
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise ConfigError(f"{path}: rows have unequal lengths")
    return np.array(rows, dtype=complex)


def _parse_molecule(node):
    node = _require_mapping(node, "molecule")
    shorthand = {"omega0", "lam", "mu"} & set(node)
    explicit = {"energies", "coupling", "dipole"} & set(node)
    if shorthand and explicit:
        raise ConfigError(
            "molecule: use either the two-level shorthand (omega0, lam, mu) "
            "or explicit matrices, not both"
        )
    if shorthand:
        _check_keys(node, "molecule", ("omega0", "lam", "mu"))
        omega0 = _get_number(node, "molecule", "omega0", required=True)
        lam = _get_number(node, "molecule", "lam", required=True)
        mu = _get_number(node, "molecule", "mu", default=1.0)
        if omega0 <= 0:
            raise ConfigError("molecule.omega0: must be > 0")
        return two_level(omega0, lam, mu)
    _check_keys(node, "molecule", ("energies", "coupling", "dipole"))
    if "energies" not in node:
        raise ConfigError("molecule.energies: required key missing")
    energies = node["energies"]
    if not isinstance(energies, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in energies
    ):
        raise ConfigError("molecule.energies: expected a list of numbers")
    for key in ("coupling", "dipole"):
        if key not in node:
            raise ConfigError(f"molecule.{key}: required key missing")
    coupling = _parse_matrix(node["coupling"], "molecule.coupling")
    dipole = _parse_matrix(node["dipole"], "molecule.dipole")
    return MolecularModel(energies=energies, coupling=coupling, dipole=dipole)


def _parse_disorder(node):
    node = _require_mapping(node, "ensemble.disorder")
    _check_keys(node, "ensemble.disorder", ("kind", "sigma", "gamma", "samples", "n_samples"))
    kind = _get_str(node, "ensemble.disorder", "kind", default="none",
                    choices=("none", "gaussian", "samples"))
    gamma = _get_number(node, "ensemble.disorder", "gamma", default=1e-4)
    sigma = _get_number(node, "ensemble.disorder", "sigma", default=0.0)
    samples = node.get("samples", ())
    n_samples = _get_int(node, "ensemble.disorder", "n_samples", default=None)
    if kind == "samples" and not isinstance(samples, list):
        raise ConfigError("ensemble.disorder.samples: expected a list of frequencies")
    return DisorderSpec(kind=kind, sigma=sigma, samples=tuple(samples), gamma=gamma), n_samples


@dataclass
class RunConfig:
    """Fully validated run description."""

    mode: str
    molecule: MolecularModel
    cavity: CavityMode
    ensemble: EnsembleSpec
    pulse: Optional[DrivePulse]
    time_grid: Optional[TimeGrid]
    frequency_grid: Optional[FrequencyGrid]
    backend: str
    rwa: bool
    n_max: int
    seed: Optional[int]
    n_disorder_samples: Optional[int]
    cavity_pulse: Optional[DrivePulse] = None
    out_dir: Optional[str] = None
    scan_sigmas: tuple = ()
    sweep_parameter: str = ""
    sweep_values: tuple = ()
    sweep_mode: str = ""
    config_hash: str = ""
    raw: dict = field(default_factory=dict)


def parse_config(text, mode=None):
    """Parse and validate a YAML config document for the given mode.

    mode may come from the CLI subcommand; when the document also carries
    run.mode the two must agree.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: not valid YAML ({exc})") from exc
    if doc is None:
        doc = {}
    doc = _require_mapping(doc, "config")
    _check_keys(
        doc,
        "config",
        (
            "molecule",
            "cavity",
            "ensemble",
            "pulse",
            "cavity_pulse",
            "grid",
            "run",
            "disorder_scan",
            "sweep",
        ),
    )

    run = _require_mapping(doc.get("run", {}), "run")
    _check_keys(run, "run", ("mode", "backend", "rwa", "n_max", "out", "seed"))
    cfg_mode = _get_str(run, "run", "mode", default=None, choices=MODES)
    if mode is None:
        mode = cfg_mode
    if mode is None:
        raise ConfigError("run.mode: required key missing (or pass a CLI subcommand)")
    if cfg_mode is not None and cfg_mode != mode:
        raise ConfigError(f"run.mode: config says {cfg_mode!r} but {mode!r} was requested")
    if mode not in MODES:
        raise ConfigError(f"run.mode: must be one of {', '.join(MODES)}")

    if "molecule" not in doc:
        raise ConfigError("molecule: required section missing")
    molecule = _parse_molecule(doc["molecule"])

    cavity_node = _require_mapping(doc.get("cavity", {}), "cavity")
    _check_keys(cavity_node, "cavity", ("omega_c", "kappa"))
    if "omega_c" not in cavity_node:
        raise ConfigError("cavity.omega_c: required key missing")
    cavity = CavityMode(
        omega_c=_get_number(cavity_node, "cavity", "omega_c", required=True),
        kappa=_get_number(cavity_node, "cavity", "kappa", default=0.0),
    )

    seed = _get_int(run, "run", "seed", default=None)

    ensemble_node = _require_mapping(doc.get("ensemble", {}), "ensemble")
    _check_keys(ensemble_node, "ensemble", ("n_molecules", "disorder"))
    disorder, n_disorder_samples = _parse_disorder(ensemble_node.get("disorder", {}))
    ensemble = EnsembleSpec(
        n_molecules=_get_int(ensemble_node, "ensemble", "n_molecules", default=1),
        disorder=disorder,
    )

    def parse_pulse(section):
        node = _require_mapping(doc[section], section)
        _check_keys(node, section, ("e0", "omega", "t_center", "tau"))
        return DrivePulse(
            e0=_get_number(node, section, "e0", required=True),
            omega=_get_number(node, section, "omega", required=True),
            t_center=_get_number(node, section, "t_center", default=0.0),
            tau=_get_number(node, section, "tau", required=True),
        )

    pulse = parse_pulse("pulse") if "pulse" in doc else None
    cavity_pulse = parse_pulse("cavity_pulse") if "cavity_pulse" in doc else None
    if cavity_pulse is not None and mode not in ("dynamics", "sweep"):
        raise ConfigError("cavity_pulse: only supported in dynamics mode")

    grid_node = _require_mapping(doc.get("grid", {}), "grid")
    _check_keys(grid_node, "grid", ("time", "frequency"))
    time_grid = None
    if "time" in grid_node:
        tnode = _require_mapping(grid_node["time"], "grid.time")
        _check_keys(tnode, "grid.time", ("t_start", "t_end", "dt"))
        time_grid = TimeGrid(
            t_start=_get_number(tnode, "grid.time", "t_start", default=0.0),
            t_end=_get_number(tnode, "grid.time", "t_end", required=True),
            dt=_get_number(tnode, "grid.time", "dt", default=0.01 / cavity.omega_c),
        )
    frequency_grid = None
    if "frequency" in grid_node:
        fnode = _require_mapping(grid_node["frequency"], "grid.frequency")
        _check_keys(fnode, "grid.frequency", ("omega_min", "omega_max", "n_points", "eta"))
        lam_scale = float(np.abs(molecule.coupling).max())
        frequency_grid = FrequencyGrid(
            omega_min=_get_number(fnode, "grid.frequency", "omega_min", required=True),
            omega_max=_get_number(fnode, "grid.frequency", "omega_max", required=True),
            n_points=_get_int(fnode, "grid.frequency", "n_points", default=2001),
            eta=_get_number(
                fnode,
                "grid.frequency",
                "eta",
                default=1e-3 * lam_scale if lam_scale > 0 else 1e-6,
            ),
        )

    needs_time = mode in ("dynamics", "exact", "compare")
    if needs_time and time_grid is None:
        raise ConfigError(f"grid.time: required for mode {mode}")
    if needs_time and pulse is None:
        raise ConfigError(f"pulse: required section missing for mode {mode}")
    if mode in ("spectrum", "disorder-scan") and frequency_grid is None:
        raise ConfigError(f"grid.frequency: required for mode {mode}")

    scan_sigmas = ()
    if mode == "disorder-scan":
        scan = _require_mapping(doc.get("disorder_scan", {}), "disorder_scan")
        _check_keys(scan, "disorder_scan", ("sigmas",))
        raw_sigmas = scan.get("sigmas")
        if not isinstance(raw_sigmas, list) or not raw_sigmas:
            raise ConfigError("disorder_scan.sigmas: expected a non-empty list")
        for i, s in enumerate(raw_sigmas):
            if isinstance(s, bool) or not isinstance(s, (int, float)) or s <= 0:
                raise ConfigError(f"disorder_scan.sigmas[{i}]: must be a positive number")
        scan_sigmas = tuple(float(s) for s in raw_sigmas)

    sweep_parameter, sweep_values, sweep_mode = "", (), ""
    if mode == "sweep":
        sweep = _require_mapping(doc.get("sweep", {}), "sweep")
        _check_keys(sweep, "sweep", ("parameter", "values", "mode"))
        sweep_parameter = _get_str(sweep, "sweep", "parameter", required=True)
        sweep_mode = _get_str(
            sweep, "sweep", "mode", required=True,
            choices=("dynamics", "exact", "compare", "spectrum"),
        )
        raw_values = sweep.get("values")
        if not isinstance(raw_values, list) or not raw_values:
            raise ConfigError("sweep.values: expected a non-empty list")
        for i, v in enumerate(raw_values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"sweep.values[{i}]: must be a number")
        sweep_values = tuple(float(v) for v in raw_values)

    return RunConfig(
        mode=mode,
        molecule=molecule,
        cavity=cavity,
        ensemble=ensemble,
        pulse=pulse,
        time_grid=time_grid,
        frequency_grid=frequency_grid,
        backend=_get_str(run, "run", "backend", default="auxiliary",
                         choices=("auxiliary", "memory")),
        rwa=_get_bool(run, "run", "rwa", default=(mode == "compare")),
        n_max=_get_int(run, "run", "n_max", default=4),
        seed=seed,
        n_disorder_samples=n_disorder_samples,
        cavity_pulse=cavity_pulse,
        out_dir=_get_str(run, "run", "out", default=None),
        scan_sigmas=scan_sigmas,
        sweep_parameter=sweep_parameter,
        sweep_values=sweep_values,
        sweep_mode=sweep_mode,
        config_hash=hashlib.sha256(
            text.encode() if isinstance(text, str) else text
        ).hexdigest(),
        raw=doc,
    )
