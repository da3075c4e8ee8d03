"""Numerically exact driven Tavis-Cummings dynamics for finite N.

The initial state (all molecules in the ground state, cavity vacuum) and
the homogeneous coupling and drive never leave the permutation-symmetric
(Dicke) sector, so the solver works in the |m, n> basis of m collectively
excited molecules and n photons: dimension (N+1)(n_max+1) instead of
2^N (n_max+1). A brute-force product-space integrator is kept alongside as
the cross-check oracle for small N.

The Hamiltonian is the rotating-wave Tavis-Cummings model; the laser drive
on the molecules keeps its full cosine carrier (no RWA on the drive).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse

from .errors import ConfigError
from .model import DrivePulse, pulse_field

TRUNCATION_POPULATION_TOL = 1e-6


@dataclass(frozen=True)
class TCConfig:
    """Driven Tavis-Cummings model parameters.

    lam is the collective coupling; the matrix element between one bright
    molecular excitation and one photon is lam for every N, and the
    resonant single-excitation splitting is 2 lam.
    """

    n_molecules: int
    omega0: float
    omega_c: float
    lam: float
    n_max: int
    pulse: DrivePulse = field(default_factory=DrivePulse.off)

    def __post_init__(self):
        if self.n_molecules < 1:
            raise ConfigError("tc.n_molecules: must be >= 1")
        if self.n_max < 1:
            raise ConfigError("tc.n_max: must be >= 1")

    @property
    def dim(self):
        return (self.n_molecules + 1) * (self.n_max + 1)


@dataclass(frozen=True)
class SymmetricState:
    """Wavefunction over the |m, n> Dicke-ladder x Fock basis."""

    amplitudes: np.ndarray
    n_molecules: int
    n_max: int

    def __post_init__(self):
        psi = np.array(self.amplitudes, dtype=complex)
        dim = (self.n_molecules + 1) * (self.n_max + 1)
        if psi.shape != (dim,):
            raise ConfigError(
                f"state.amplitudes: expected shape ({dim},), got {psi.shape}"
            )
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-10:
            raise ConfigError(f"state.amplitudes: norm {norm!r} deviates from 1")
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)


def ground_state(cfg):
    """|m=0, n=0>: all molecules down, cavity vacuum."""
    psi = np.zeros(cfg.dim, dtype=complex)
    psi[0] = 1.0
    return SymmetricState(psi, cfg.n_molecules, cfg.n_max)


def _symmetric_operators(cfg):
    """Static Hamiltonian, drive operator J+ + J-, and diagnostic diagonals."""
    n_mol, n_ph = cfg.n_molecules, cfg.n_max
    dim = cfg.dim

    def idx(m, n):
        return m * (n_ph + 1) + n

    ms, ns = np.divmod(np.arange(dim), n_ph + 1)
    diag = ms * cfg.omega0 + ns * cfg.omega_c

    h_static = sparse.lil_matrix((dim, dim))
    h_static.setdiag(diag)
    drive = sparse.lil_matrix((dim, dim))
    for m in range(n_mol + 1):
        jminus = np.sqrt(m * (n_mol - m + 1))  # <m-1| J- |m>
        for n in range(n_ph + 1):
            i = idx(m, n)
            # lam/sqrt(N) (J- a^dag + J+ a) within the truncated Fock space
            if m >= 1 and n + 1 <= n_ph:
                j = idx(m - 1, n + 1)
                el = cfg.lam / np.sqrt(n_mol) * jminus * np.sqrt(n + 1)
                h_static[j, i] = el
                h_static[i, j] = el
            if m + 1 <= n_mol:
                j = idx(m + 1, n)
                el = np.sqrt((m + 1) * (n_mol - m))  # <m+1| J+ |m>
                drive[j, i] = el
                drive[i, j] = el
    return h_static.tocsr(), drive.tocsr(), ms, ns


def build_tc_hamiltonian(cfg, t):
    """Sparse Hermitian H(t) over |m, n>, drive evaluated at time t."""
    h_static, drive, _, _ = _symmetric_operators(cfg)
    return h_static + pulse_field(cfg.pulse, t) * drive


@dataclass(frozen=True)
class ExactResult:
    """Observable time series from an exact propagation."""

    times: np.ndarray
    p_excited: np.ndarray  # <sum sigma^dag sigma> / N
    n_photon: np.ndarray
    norm: np.ndarray
    n_excitations: np.ndarray  # <a^dag a + sum sigma^dag sigma>
    final_state: SymmetricState
    max_top_layer: float  # peak population of the n = n_max Fock layer

    @property
    def truncation_safe(self):
        return self.max_top_layer <= TRUNCATION_POPULATION_TOL


def propagate_exact(cfg, grid, psi0=None):
    """RK4 integration of i psi' = H(t) psi in the symmetric sector.

    Results carry a truncation-safety flag: if the top Fock layer ever
    holds more than 1e-6 population, the run is marked unsafe.
    """
    if psi0 is None:
        psi0 = ground_state(cfg)
    if (psi0.n_molecules, psi0.n_max) != (cfg.n_molecules, cfg.n_max):
        raise ConfigError("state.amplitudes: basis does not match the configuration")
    h_static, drive, ms, ns = _symmetric_operators(cfg)
    top_layer = ns == cfg.n_max

    def rhs(t, psi):
        return -1j * (h_static @ psi + pulse_field(cfg.pulse, t) * (drive @ psi))

    times = grid.times()
    dt = grid.dt
    psi = psi0.amplitudes.astype(complex)
    n_t = times.size
    p_e = np.empty(n_t)
    n_ph = np.empty(n_t)
    norm = np.empty(n_t)
    n_ex = np.empty(n_t)
    max_top = 0.0
    for i, t in enumerate(times):
        prob = np.abs(psi) ** 2
        p_e[i] = float(prob @ ms) / cfg.n_molecules
        n_ph[i] = float(prob @ ns)
        norm[i] = float(prob.sum())
        n_ex[i] = float(prob @ (ms + ns))
        max_top = max(max_top, float(prob[top_layer].sum()))
        if i == n_t - 1:
            break
        k1 = rhs(t, psi)
        k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2)
        k4 = rhs(t + dt, psi + dt * k3)
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    final = SymmetricState(psi / np.linalg.norm(psi), cfg.n_molecules, cfg.n_max)
    return ExactResult(times, p_e, n_ph, norm, n_ex, final, max_top)


def single_excitation_eigenstates(cfg):
    """Eigenvalues of the bright single-excitation block.

    The undriven block spanned by |m=0, n=1> and |m=1, n=0> is

        [[omega_c, lam], [lam, omega0]],

    so the resonant splitting is exactly 2 lam.
    """
    block = np.array([[cfg.omega_c, cfg.lam], [cfg.lam, cfg.omega0]])
    return np.linalg.eigvalsh(block)


def propagate_product_space(cfg, grid):
    """Brute-force integration in the full 2^N x Fock product space.

    Test oracle for the symmetric-subspace solver; exponential cost, keep
    N small. Starts from the global ground state.
    """
    n_mol, n_ph = cfg.n_molecules, cfg.n_max
    if n_mol > 6:
        raise ConfigError("tc.n_molecules: product-space oracle limited to N <= 6")
    dim_ph = n_ph + 1
    a = np.diag(np.sqrt(np.arange(1, dim_ph)), k=1)
    sm = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e|
    num = np.array([[0.0, 0.0], [0.0, 1.0]])
    eye2 = np.eye(2)

    def embed(op, site):
        factors = [eye2] * n_mol + [np.eye(dim_ph)]
        factors[site] = op
        out = factors[0]
        for f in factors[1:]:
            out = np.kron(out, f)
        return out

    a_full = np.kron(np.eye(2**n_mol), a)
    h_static = cfg.omega_c * (a_full.T @ a_full)
    drive = np.zeros_like(h_static)
    for site in range(n_mol):
        sm_full = embed(sm, site)
        h_static = h_static + cfg.omega0 * embed(num, site)
        h_static = h_static + cfg.lam / np.sqrt(n_mol) * (
            sm_full @ a_full.T.conj() + sm_full.T.conj() @ a_full
        )
        drive = drive + sm_full + sm_full.T
    n_e_full = sum(embed(num, site) for site in range(n_mol))

    psi = np.zeros(h_static.shape[0], dtype=complex)
    psi[0] = 1.0

    def rhs(t, psi):
        return -1j * ((h_static + pulse_field(cfg.pulse, t) * drive) @ psi)

    times = grid.times()
    dt = grid.dt
    p_e = np.empty(times.size)
    for i, t in enumerate(times):
        p_e[i] = float(np.real(np.vdot(psi, n_e_full @ psi))) / n_mol
        if i == times.size - 1:
            break
        k1 = rhs(t, psi)
        k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2)
        k4 = rhs(t + dt, psi + dt * k3)
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return times, p_e
