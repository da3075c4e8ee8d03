import numpy as np
import pytest

from poldyn.config import parse_config
from poldyn.errors import ConfigError

MINIMAL_DYNAMICS = """
molecule:
  omega0: 1.0
  lam: 0.1
cavity:
  omega_c: 1.0
pulse:
  e0: 0.05
  omega: 1.0
  t_center: 10.0
  tau: 3.0
grid:
  time:
    t_end: 20.0
run:
  mode: dynamics
"""


def test_minimal_dynamics_with_defaults():
    cfg = parse_config(MINIMAL_DYNAMICS)
    assert cfg.mode == "dynamics"
    assert cfg.time_grid.dt == pytest.approx(0.01)  # 0.01 / omega_c
    assert cfg.backend == "auxiliary"
    assert cfg.rwa is False
    assert cfg.ensemble.n_molecules == 1
    assert cfg.cavity.kappa == 0.0
    assert cfg.molecule.coupling[0, 1] == 0.1
    assert len(cfg.config_hash) == 64


def test_mode_from_subcommand():
    text = MINIMAL_DYNAMICS.replace("run:\n  mode: dynamics\n", "")
    cfg = parse_config(text, mode="dynamics")
    assert cfg.mode == "dynamics"


def test_mode_mismatch_rejected():
    with pytest.raises(ConfigError, match="run.mode"):
        parse_config(MINIMAL_DYNAMICS, mode="exact")


def test_negative_kappa_names_key():
    text = MINIMAL_DYNAMICS.replace("omega_c: 1.0", "omega_c: 1.0\n  kappa: -0.1")
    with pytest.raises(ConfigError, match="cavity.kappa"):
        parse_config(text)


def test_non_hermitian_coupling_names_entry():
    text = """
molecule:
  energies: [0.0, 1.0]
  coupling: [[0.0, 0.1], [0.2, 0.0]]
  dipole: [[0.0, 1.0], [1.0, 0.0]]
cavity:
  omega_c: 1.0
pulse: {e0: 0.0, omega: 1.0, tau: 1.0}
grid:
  time: {t_end: 1.0}
run: {mode: dynamics}
"""
    with pytest.raises(ConfigError, match=r"\(0,1\)|\(1,0\)"):
        parse_config(text)


def test_unknown_key_rejected():
    text = MINIMAL_DYNAMICS + "\nextra_section:\n  a: 1\n"
    with pytest.raises(ConfigError, match="extra_section"):
        parse_config(text)
    text = MINIMAL_DYNAMICS.replace("omega_c: 1.0", "omega_c: 1.0\n  volume: 2.0")
    with pytest.raises(ConfigError, match="cavity.volume"):
        parse_config(text)


def test_missing_required_section():
    text = MINIMAL_DYNAMICS.replace("pulse:", "pulse_off:")
    with pytest.raises(ConfigError, match="pulse"):
        parse_config(text)


def test_shorthand_and_explicit_molecule_conflict():
    text = MINIMAL_DYNAMICS.replace(
        "molecule:\n  omega0: 1.0\n  lam: 0.1",
        "molecule:\n  omega0: 1.0\n  lam: 0.1\n  energies: [0.0, 1.0]",
    )
    with pytest.raises(ConfigError, match="shorthand"):
        parse_config(text)


def test_complex_matrix_entries():
    text = """
molecule:
  energies: [0.0, 1.0]
  coupling: [[0.0, [0.0, 0.1]], [[0.0, -0.1], 0.0]]
  dipole: [[0.0, 1.0], [1.0, 0.0]]
cavity: {omega_c: 1.0}
pulse: {e0: 0.0, omega: 1.0, tau: 1.0}
grid:
  time: {t_end: 1.0}
run: {mode: dynamics}
"""
    cfg = parse_config(text)
    assert cfg.molecule.coupling[0, 1] == 0.1j


def test_spectrum_mode_requirements():
    text = """
molecule: {omega0: 1.0, lam: 0.1}
cavity: {omega_c: 1.0, kappa: 0.005}
grid:
  frequency: {omega_min: 0.5, omega_max: 1.5}
run: {mode: spectrum}
"""
    cfg = parse_config(text)
    assert cfg.frequency_grid.n_points == 2001
    assert cfg.frequency_grid.eta == pytest.approx(1e-4)  # 1e-3 * lam
    with pytest.raises(ConfigError, match="grid.frequency"):
        parse_config(text.replace("  frequency: {omega_min: 0.5, omega_max: 1.5}\n", "  {}\n"))


def test_compare_defaults_to_rwa():
    text = MINIMAL_DYNAMICS.replace("mode: dynamics", "mode: compare")
    cfg = parse_config(text)
    assert cfg.rwa is True
    assert cfg.n_max == 4


def test_disorder_scan_sigmas():
    text = """
molecule: {omega0: 1.0, lam: 0.1}
cavity: {omega_c: 1.0}
ensemble:
  disorder: {kind: gaussian, sigma: 0.01, gamma: 1.0e-6}
grid:
  frequency: {omega_min: 0.5, omega_max: 1.5}
disorder_scan:
  sigmas: [0.01, 0.05, 0.1]
run: {mode: disorder-scan}
"""
    cfg = parse_config(text)
    assert cfg.scan_sigmas == (0.01, 0.05, 0.1)
    bad = text.replace("sigmas: [0.01, 0.05, 0.1]", "sigmas: [0.01, -0.05]")
    with pytest.raises(ConfigError, match=r"sigmas\[1\]"):
        parse_config(bad)


def test_sweep_section():
    text = """
molecule: {omega0: 1.0, lam: 0.1}
cavity: {omega_c: 1.0, kappa: 0.005}
grid:
  frequency: {omega_min: 0.5, omega_max: 1.5}
sweep:
  parameter: cavity.kappa
  values: [0.001, 0.002]
  mode: spectrum
run: {mode: sweep}
"""
    cfg = parse_config(text)
    assert cfg.sweep_parameter == "cavity.kappa"
    assert cfg.sweep_values == (0.001, 0.002)
    assert cfg.sweep_mode == "spectrum"


def test_type_errors_name_keys():
    with pytest.raises(ConfigError, match="pulse.e0"):
        parse_config(MINIMAL_DYNAMICS.replace("e0: 0.05", "e0: strong"))
    with pytest.raises(ConfigError, match="run.n_max"):
        parse_config(MINIMAL_DYNAMICS.replace("mode: dynamics", "mode: dynamics\n  n_max: 2.5"))
    with pytest.raises(ConfigError, match="run.rwa"):
        parse_config(MINIMAL_DYNAMICS.replace("mode: dynamics", "mode: dynamics\n  rwa: maybe"))


def test_cavity_pulse_dynamics_only():
    text = MINIMAL_DYNAMICS + "\ncavity_pulse: {e0: 0.01, omega: 1.0, tau: 2.0}\n"
    cfg = parse_config(text)
    assert cfg.cavity_pulse.e0 == 0.01
    bad = text.replace("mode: dynamics", "mode: compare")
    with pytest.raises(ConfigError, match="cavity_pulse"):
        parse_config(bad)


def test_run_out_key():
    text = MINIMAL_DYNAMICS.replace("mode: dynamics", "mode: dynamics\n  out: results")
    assert parse_config(text).out_dir == "results"


def test_hash_deterministic():
    a = parse_config(MINIMAL_DYNAMICS)
    b = parse_config(MINIMAL_DYNAMICS)
    assert a.config_hash == b.config_hash
    c = parse_config(MINIMAL_DYNAMICS.replace("0.05", "0.06"))
    assert c.config_hash != a.config_hash


def test_not_yaml():
    with pytest.raises(ConfigError, match="YAML"):
        parse_config("molecule: [unclosed")
    with pytest.raises(ConfigError, match="mapping"):
        parse_config("- just\n- a\n- list\n")
