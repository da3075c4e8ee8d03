"""Mode orchestration: dynamics, exact, compare, spectrum, disorder-scan, sweep.

Each mode writes its CSV outputs into the requested directory and returns a
RunOutcome with the exit status (0 ok, 3 truncation-unsafe) and a one-line
summary. Validation and invariant failures raise and are mapped to exit
codes by the CLI.
"""

from __future__ import annotations

import copy
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .config import RunConfig, parse_config
from .csvio import write_csv
from .errors import ConfigError
from .exact import TCConfig, propagate_exact
from .meanfield import bare_molecule_reference, propagate_meanfield
from .model import DisorderSpec, pulse_field
from .spectra import transmission_spectrum


@dataclass
class RunOutcome:
    exit_code: int
    files: list = field(default_factory=list)
    summary: str = ""


def _meta(cfg, mode, **extra):
    meta = {"config-sha256": cfg.config_hash, "mode": mode}
    meta.update(extra)
    return meta


def _require_two_level(cfg, what):
    if cfg.molecule.n_levels != 2:
        raise ConfigError(f"molecule: {what} requires a two-level molecule")
    omega0 = float(cfg.molecule.energies[1] - cfg.molecule.energies[0])
    lam = float(abs(cfg.molecule.coupling[1, 0]))
    return omega0, lam


def _tc_config(cfg):
    omega0, lam = _require_two_level(cfg, "the exact reference")
    return TCConfig(
        n_molecules=cfg.ensemble.n_molecules,
        omega0=omega0,
        omega_c=cfg.cavity.omega_c,
        lam=lam,
        n_max=cfg.n_max,
        pulse=cfg.pulse,
    )


def run_dynamics(cfg, out_dir):
    cavity_drive = None
    if cfg.cavity_pulse is not None:
        # external force on the cavity quadrature, already 1/sqrt(N)-scaled
        cavity_drive = lambda t: pulse_field(cfg.cavity_pulse, t)
    traj = propagate_meanfield(
        cfg.molecule, cfg.cavity, cfg.pulse, cfg.time_grid,
        backend=cfg.backend, rwa=cfg.rwa, cavity_drive=cavity_drive,
    )
    m = cfg.molecule.n_levels
    columns = (
        ["t"] + [f"pop_{i}" for i in range(m)] + ["polarization", "q", "p", "field_energy"]
    )
    rows = (
        [float(traj.times[i])]
        + [float(traj.populations[i, j]) for j in range(m)]
        + [
            float(traj.polarization[i]),
            float(traj.qs[i]),
            float(traj.ps[i]),
            float(traj.field_energy[i]),
        ]
        for i in range(traj.times.size)
    )
    path = write_csv(
        Path(out_dir) / "dynamics.csv",
        columns,
        rows,
        _meta(cfg, "dynamics", backend=cfg.backend, rwa=cfg.rwa,
              units="t in 1/energy, populations dimensionless"),
    )
    return RunOutcome(0, [path], f"dynamics: {traj.times.size} samples")


def run_exact(cfg, out_dir):
    result = propagate_exact(_tc_config(cfg), cfg.time_grid)
    rows = (
        [
            float(result.times[i]),
            float(result.p_excited[i]),
            float(result.n_photon[i]),
            float(result.norm[i]),
            float(result.n_excitations[i]),
        ]
        for i in range(result.times.size)
    )
    path = write_csv(
        Path(out_dir) / "exact.csv",
        ["t", "p_e", "n_photon", "norm", "n_ex"],
        rows,
        _meta(cfg, "exact", n_molecules=cfg.ensemble.n_molecules, n_max=cfg.n_max,
              truncation_safe=result.truncation_safe,
              max_top_layer=result.max_top_layer),
    )
    code = 0 if result.truncation_safe else 3
    note = "" if result.truncation_safe else " [truncation-unsafe]"
    return RunOutcome(code, [path], f"exact: max P_e={result.p_excited.max():.6g}{note}")


def run_compare(cfg, out_dir):
    mf = propagate_meanfield(
        cfg.molecule, cfg.cavity, cfg.pulse, cfg.time_grid,
        backend=cfg.backend, rwa=cfg.rwa,
    )
    exact = propagate_exact(_tc_config(cfg), cfg.time_grid)
    bare = bare_molecule_reference(cfg.molecule, cfg.pulse, cfg.time_grid)
    p_mf = mf.populations[:, 1]
    dev = np.abs(p_mf - exact.p_excited)
    max_dev = float(dev.max())
    rms_dev = float(np.sqrt(np.mean(dev**2)))
    rows = (
        [
            float(mf.times[i]),
            float(p_mf[i]),
            float(exact.p_excited[i]),
            float(bare.populations[i, 1]),
        ]
        for i in range(mf.times.size)
    )
    path = write_csv(
        Path(out_dir) / "compare.csv",
        ["t", "p_e_meanfield", "p_e_exact", "p_e_bare"],
        rows,
        _meta(cfg, "compare", n_molecules=cfg.ensemble.n_molecules, n_max=cfg.n_max,
              rwa=cfg.rwa, max_abs_dev=max_dev, rms_dev=rms_dev,
              truncation_safe=exact.truncation_safe),
    )
    code = 0 if exact.truncation_safe else 3
    note = "" if exact.truncation_safe else " [truncation-unsafe]"
    return RunOutcome(
        code, [path], f"compare: max|dP_e|={max_dev:.6g} rms={rms_dev:.6g}{note}"
    )


def _effective_disorder(cfg):
    """Resolve the finite-sample cross-check mode, if requested."""
    disorder = cfg.ensemble.disorder
    if disorder.kind == "gaussian" and cfg.n_disorder_samples:
        omega0, _ = _require_two_level(cfg, "sampled disorder")
        rng = np.random.default_rng(cfg.seed)
        draws = rng.normal(omega0, disorder.sigma, cfg.n_disorder_samples)
        return DisorderSpec(kind="samples", samples=tuple(draws), gamma=disorder.gamma)
    return disorder


def _write_spectrum(cfg, out_dir, spectrum, tag="", **meta_extra):
    sp_name = f"spectrum{tag}.csv"
    pk_name = f"peaks{tag}.csv"
    meta = _meta(cfg, cfg.mode, eta=cfg.frequency_grid.eta,
                 kappa=cfg.cavity.kappa, **meta_extra)
    if cfg.molecule.n_levels == 2:
        meta["omega0"] = float(cfg.molecule.energies[1] - cfg.molecule.energies[0])
        meta["lam"] = float(abs(cfg.molecule.coupling[1, 0]))
    rows = (
        [
            float(spectrum.omegas[i]),
            float(spectrum.pi_retarded[i].real),
            float(spectrum.pi_retarded[i].imag),
            float(spectrum.f_retarded[i].real),
            float(spectrum.f_retarded[i].imag),
            float(spectrum.a[i]),
            float(spectrum.transmission[i]),
        ]
        for i in range(spectrum.omegas.size)
    )
    sp_path = write_csv(
        Path(out_dir) / sp_name,
        ["omega", "re_pi", "im_pi", "re_f", "im_f", "a", "t"],
        rows,
        meta,
    )
    pk_meta = dict(meta)
    pk_meta.update(
        splitting=float(spectrum.splitting),
        resolved=spectrum.resolved_splitting,
        narrow_peak_warning=spectrum.narrow_peak_warning,
    )
    pk_path = write_csv(
        Path(out_dir) / pk_name,
        ["position", "height"],
        (
            [float(spectrum.peak_positions[i]), float(spectrum.peak_heights[i])]
            for i in range(spectrum.peak_positions.size)
        ),
        pk_meta,
    )
    return sp_path, pk_path


def run_spectrum(cfg, out_dir):
    disorder = _effective_disorder(cfg)
    spectrum = transmission_spectrum(
        cfg.molecule, cfg.cavity, cfg.frequency_grid, disorder=disorder
    )
    sp_path, pk_path = _write_spectrum(cfg, out_dir, spectrum,
                                       disorder_kind=disorder.kind)
    split = f"{spectrum.splitting:.6g}" if spectrum.resolved_splitting else "unresolved"
    return RunOutcome(
        0, [sp_path, pk_path],
        f"spectrum: {spectrum.peak_positions.size} peaks, splitting {split}",
    )


def run_disorder_scan(cfg, out_dir):
    omega0, lam = _require_two_level(cfg, "the disorder scan")
    files = []
    scan_rows = []
    gamma = cfg.ensemble.disorder.gamma
    for i, sigma in enumerate(cfg.scan_sigmas):
        disorder = DisorderSpec(kind="gaussian", sigma=sigma, gamma=gamma)
        spectrum = transmission_spectrum(
            cfg.molecule, cfg.cavity, cfg.frequency_grid, disorder=disorder
        )
        sp_path, pk_path = _write_spectrum(
            cfg, out_dir, spectrum, tag=f"_{i:03d}", sigma=sigma
        )
        files += [sp_path, pk_path]
        n_peaks = spectrum.peak_positions.size
        if n_peaks >= 2:
            top = np.sort(
                spectrum.peak_positions[np.argsort(spectrum.peak_heights)[-2:]]
            )
            lo_peak, hi_peak = float(top[0]), float(top[1])
        else:
            lo_peak = hi_peak = float("nan")
        scan_rows.append(
            [float(sigma), int(n_peaks), lo_peak, hi_peak, float(spectrum.splitting)]
        )
    scan_path = write_csv(
        Path(out_dir) / "scan.csv",
        ["sigma", "n_peaks", "peak_lo", "peak_hi", "splitting"],
        scan_rows,
        _meta(cfg, "disorder-scan", omega0=omega0, lam=lam, gamma=gamma),
    )
    return RunOutcome(0, files + [scan_path], f"disorder-scan: {len(scan_rows)} points")


def _set_dotted(doc, dotted, value):
    keys = dotted.split(".")
    node = doc
    for key in keys[:-1]:
        if not isinstance(node, dict) or key not in node:
            raise ConfigError(f"sweep.parameter: path {dotted!r} not found in config")
        node = node[key]
    if not isinstance(node, dict) or keys[-1] not in node:
        raise ConfigError(f"sweep.parameter: path {dotted!r} not found in config")
    node[keys[-1]] = value


def run_sweep(cfg, out_dir, threads=1):
    points = []
    for i, value in enumerate(cfg.sweep_values):
        doc = copy.deepcopy(cfg.raw)
        doc.pop("sweep", None)
        doc.setdefault("run", {})["mode"] = cfg.sweep_mode
        _set_dotted(doc, cfg.sweep_parameter, value)
        text = yaml.safe_dump(doc, sort_keys=True)
        point_cfg = parse_config(text, mode=cfg.sweep_mode)
        point_dir = Path(out_dir) / f"point_{i:03d}"
        point_dir.mkdir(parents=True, exist_ok=True)
        points.append((i, value, point_cfg, point_dir))

    def run_point(item):
        i, value, point_cfg, point_dir = item
        return i, value, point_dir, run(point_cfg, point_dir, threads=1)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_point, points))
    else:
        results = [run_point(item) for item in points]

    files = []
    worst = 0
    index_rows = []
    for i, value, point_dir, outcome in sorted(results):
        files += outcome.files
        worst = max(worst, outcome.exit_code)
        index_rows.append([i, float(value), point_dir.name])
    index_path = write_csv(
        Path(out_dir) / "index.csv",
        ["index", "value", "directory"],
        index_rows,
        _meta(cfg, "sweep", parameter=cfg.sweep_parameter, inner_mode=cfg.sweep_mode),
    )
    return RunOutcome(
        worst, files + [index_path],
        f"sweep: {len(index_rows)} points over {cfg.sweep_parameter}",
    )


_MODE_RUNNERS = {
    "dynamics": run_dynamics,
    "exact": run_exact,
    "compare": run_compare,
    "spectrum": run_spectrum,
    "disorder-scan": run_disorder_scan,
}


def run(cfg: RunConfig, out_dir, threads=1):
    """Execute the configured mode, writing outputs into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.mode == "sweep":
        return run_sweep(cfg, out, threads=threads)
    if cfg.mode not in _MODE_RUNNERS:
        raise ConfigError(f"run.mode: unknown mode {cfg.mode!r}")
    return _MODE_RUNNERS[cfg.mode](cfg, out)
