"""Collective cavity-polariton dynamics and photon Green's function spectra.

Mean-field density-matrix propagation of molecules coupled to one cavity
mode (exact in the many-molecule limit), a numerically exact driven
Tavis-Cummings reference solver, and frequency-domain transmission spectra
with cavity decay and energetic disorder.
"""

__version__ = "0.1.0"

from .errors import ConfigError, InvariantViolation, PoldynError, ResourceLimit
from .model import (
    CavityMode,
    DisorderSpec,
    DrivePulse,
    EnsembleSpec,
    MolecularModel,
    TimeGrid,
    bare_hamiltonian,
    pulse_field,
    two_level,
)
from .mapping import verify_mapping_commutators
from .photon import PhotonKernel, d0_retarded, step_auxiliary_oscillator
from .meanfield import (
    MeanFieldState,
    Trajectory,
    bare_molecule_reference,
    energy_functional,
    hartree_potential,
    propagate_meanfield,
)
from .exact import (
    SymmetricState,
    TCConfig,
    build_tc_hamiltonian,
    propagate_exact,
    single_excitation_eigenstates,
)
from .dawson import dawson
from .spectra import (
    FrequencyGrid,
    Spectrum,
    bare_particle_gf,
    bare_photon_gf,
    disorder_polarization_gaussian,
    disorder_polarization_quadrature,
    dyson_photon,
    polarization_bubble,
    rabi_poles,
    transmission_spectrum,
)
from .config import RunConfig, parse_config
from .runner import run

__all__ = [
    "CavityMode",
    "ConfigError",
    "DisorderSpec",
    "DrivePulse",
    "EnsembleSpec",
    "FrequencyGrid",
    "InvariantViolation",
    "MeanFieldState",
    "MolecularModel",
    "PhotonKernel",
    "PoldynError",
    "ResourceLimit",
    "RunConfig",
    "Spectrum",
    "SymmetricState",
    "TCConfig",
    "TimeGrid",
    "Trajectory",
    "bare_hamiltonian",
    "bare_molecule_reference",
    "bare_particle_gf",
    "bare_photon_gf",
    "build_tc_hamiltonian",
    "d0_retarded",
    "dawson",
    "disorder_polarization_gaussian",
    "disorder_polarization_quadrature",
    "dyson_photon",
    "energy_functional",
    "hartree_potential",
    "parse_config",
    "polarization_bubble",
    "propagate_exact",
    "propagate_meanfield",
    "pulse_field",
    "rabi_poles",
    "run",
    "single_excitation_eigenstates",
    "step_auxiliary_oscillator",
    "transmission_spectrum",
    "two_level",
    "verify_mapping_commutators",
]
