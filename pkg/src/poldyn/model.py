"""Domain types for molecules, cavity, ensemble, and laser driving.

Units: hbar = 1 throughout. Energies and frequencies share one arbitrary
user-chosen unit, times its inverse. The molecular eigenbasis is the input
representation; nothing here diagonalizes anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

HERMITICITY_TOL = 1e-12

# hard cap on the number of propagation steps a TimeGrid may request
MAX_TIME_STEPS = 5_000_000


def _as_readonly_complex(a, name):
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigError(f"{name}: expected a square matrix, got shape {m.shape}")
    dev = np.abs(m - m.conj().T).max()
    if dev > HERMITICITY_TOL:
        i, j = np.unravel_index(np.argmax(np.abs(m - m.conj().T)), m.shape)
        raise ConfigError(
            f"{name}: matrix is not Hermitian, entry ({i},{j}) deviates by {dev:.3g}"
        )
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class MolecularModel:
    """One molecule in its eigenbasis.

    energies: M eigenenergies, sorted non-decreasing, M >= 2.
    coupling: M x M Hermitian matrix of collective cavity couplings
        (energy units).
    dipole: M x M Hermitian matrix of dimensionless drive weights.
    """

    energies: np.ndarray
    coupling: np.ndarray
    dipole: np.ndarray

    def __post_init__(self):
        e = np.array(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 2:
            raise ConfigError("molecule.energies: need at least 2 eigenenergies")
        if np.any(np.diff(e) < 0):
            raise ConfigError("molecule.energies: must be sorted non-decreasing")
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)
        for name in ("coupling", "dipole"):
            m = _as_readonly_complex(getattr(self, name), f"molecule.{name}")
            if m.shape[0] != e.size:
                raise ConfigError(
                    f"molecule.{name}: shape {m.shape} does not match {e.size} energies"
                )
            object.__setattr__(self, name, m)

    @property
    def n_levels(self):
        return self.energies.size


@dataclass(frozen=True)
class CavityMode:
    """Single cavity mode: frequency omega_c > 0 and Markovian decay kappa >= 0.

    kappa is the amplitude decay rate; the empty-cavity spectral line has
    half-width-at-half-maximum equal to kappa. Only the underdamped regime
    kappa < omega_c is supported.
    """

    omega_c: float
    kappa: float = 0.0

    def __post_init__(self):
        if self.omega_c <= 0:
            raise ConfigError("cavity.omega_c: must be > 0")
        if self.kappa < 0:
            raise ConfigError("cavity.kappa: must be >= 0")
        if self.kappa >= self.omega_c:
            raise ConfigError(
                "cavity.kappa: overdamped cavity (kappa >= omega_c) not supported"
            )


@dataclass(frozen=True)
class DisorderSpec:
    """Static transition-frequency disorder.

    kind: 'none', 'gaussian' (std sigma about the transition), or 'samples'
    (explicit list of transition frequencies, equal weights).
    gamma: Lorentzian regulator of the disorder integral, > 0.
    """

    kind: str = "none"
    sigma: float = 0.0
    samples: tuple = ()
    gamma: float = 1e-4

    def __post_init__(self):
        if self.kind not in ("none", "gaussian", "samples"):
            raise ConfigError(
                f"disorder.kind: unknown kind {self.kind!r}, "
                "expected none | gaussian | samples"
            )
        if self.kind == "gaussian" and self.sigma <= 0:
            raise ConfigError("disorder.sigma: must be > 0 for gaussian disorder")
        if self.kind == "samples":
            s = tuple(float(x) for x in self.samples)
            if len(s) == 0:
                raise ConfigError("disorder.samples: need at least one frequency")
            object.__setattr__(self, "samples", s)
        if self.gamma <= 0:
            raise ConfigError("disorder.gamma: must be > 0")


@dataclass(frozen=True)
class EnsembleSpec:
    """Number of identical molecules and their disorder law."""

    n_molecules: int = 1
    disorder: DisorderSpec = field(default_factory=DisorderSpec)

    def __post_init__(self):
        if self.n_molecules < 1:
            raise ConfigError("ensemble.n_molecules: must be >= 1")


@dataclass(frozen=True)
class DrivePulse:
    """Gaussian laser pulse E(t) = e0 cos(omega t) exp(-(t - t_center)^2 / 2 tau^2)."""

    e0: float
    omega: float
    t_center: float
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ConfigError("pulse.tau: must be > 0")

    @classmethod
    def off(cls):
        return cls(e0=0.0, omega=1.0, t_center=0.0, tau=1.0)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid for propagation."""

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigError("grid.dt: must be > 0")
        if self.t_end <= self.t_start:
            raise ConfigError("grid.t_end: must be > grid.t_start")
        if (self.t_end - self.t_start) / self.dt > MAX_TIME_STEPS:
            raise ConfigError(
                f"grid: more than {MAX_TIME_STEPS} steps requested, refusing"
            )

    @property
    def n_steps(self):
        return int(round((self.t_end - self.t_start) / self.dt))

    def times(self):
        return self.t_start + self.dt * np.arange(self.n_steps + 1)


def two_level(omega0, lam, mu=1.0):
    """Two-level molecule: energies (0, omega0), off-diagonal coupling lam
    and off-diagonal drive weight mu.

    In the rotating-wave convention lam is exactly the Tavis-Cummings
    coupling constant, giving the resonant Rabi splitting 2*lam.
    """
    if omega0 <= 0:
        raise ConfigError("two_level: omega0 must be > 0")
    coupling = np.array([[0.0, lam], [np.conj(lam), 0.0]])
    dipole = np.array([[0.0, mu], [np.conj(mu), 0.0]])
    return MolecularModel(energies=[0.0, omega0], coupling=coupling, dipole=dipole)


def pulse_field(pulse, t):
    """Electric field of the Gaussian pulse at time t (scalar or array)."""
    t = np.asarray(t, dtype=float)
    arg = (t - pulse.t_center) / pulse.tau
    val = pulse.e0 * np.cos(pulse.omega * t) * np.exp(-0.5 * arg * arg)
    return val if val.ndim else float(val)


def bare_hamiltonian(molecule, pulse, t):
    """Driven single-molecule Hamiltonian h(t) = diag(E) - E(t) * dipole."""
    h = np.diag(molecule.energies.astype(complex))
    e_t = pulse_field(pulse, t)
    if e_t != 0.0:
        h -= e_t * molecule.dipole
    return h
