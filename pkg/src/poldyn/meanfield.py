"""Mean-field polariton dynamics of one representative molecule.

In the thermodynamic limit the only surviving feedback of the ensemble on a
molecule is the time-local Hartree potential: the collective polarization
drives the cavity field through the bare photon propagator, and the dressed
field acts back as lambda * q on every molecule. In scaled quadratures
q = <phi>/sqrt(N), p = <pi>/sqrt(N) the equations close without any N:

    i rho' = [h(t) + lambda q(t), rho]
    q' = omega_c p
    p' = -omega_c q - 2 kappa p - tr(lambda rho) - f(t)

with f(t) an optional external cavity force, already scaled by 1/sqrt(N).

Two interchangeable backends integrate the same system: 'auxiliary'
co-propagates (q, p) with classical RK4, 'memory' eliminates the oscillator
and evaluates the kernel convolution over the stored polarization history
(endpoint-corrected trapezoidal weights, Adams-Bashforth-Moulton stepping;
both are globally fourth order).

The optional rotating-wave mode replaces the displacement coupling by the
secular form matching the Tavis-Cummings Hamiltonian: the raising part of
the coupling matrix pairs with the photon annihilation amplitude, so the
off-diagonal coupling equals the Tavis-Cummings lambda exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvariantViolation
from .model import CavityMode, MolecularModel, bare_hamiltonian
from .photon import PhotonKernel, d0_retarded, d0_retarded_slope

TRACE_TOL = 1e-8
HERM_TOL = 1e-8
EIG_TOL = 1e-8
PURITY_TOL = 1e-6


@dataclass(frozen=True)
class MeanFieldState:
    """Density matrix of one molecule plus the scaled cavity quadratures."""

    rho: np.ndarray
    q: float = 0.0
    p: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ConfigError(f"state.rho: expected square matrix, got {rho.shape}")
        problem = _state_problem(rho)
        if problem:
            raise ConfigError(f"state.rho: {problem}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


def _state_problem(rho):
    """Return a description of the violated density-matrix invariant, if any."""
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        return f"trace {tr.real:.12g} deviates from 1 beyond {TRACE_TOL}"
    if np.abs(rho - rho.conj().T).max() > HERM_TOL:
        return "not Hermitian"
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals.min() < -EIG_TOL or evals.max() > 1.0 + EIG_TOL:
        return f"eigenvalues [{evals.min():.3g}, {evals.max():.3g}] outside [0, 1]"
    return None


def ground_state(molecule):
    """Lowest-eigenstate projector with the cavity mean field at rest."""
    rho = np.zeros((molecule.n_levels, molecule.n_levels), dtype=complex)
    rho[0, 0] = 1.0
    return MeanFieldState(rho=rho, q=0.0, p=0.0, t=0.0)


@dataclass(frozen=True)
class Trajectory:
    """Propagation output on the full time grid."""

    times: np.ndarray
    rhos: np.ndarray  # (n_times, M, M)
    qs: np.ndarray
    ps: np.ndarray
    populations: np.ndarray  # (n_times, M), Re diag rho
    polarization: np.ndarray  # Re tr(lambda rho)
    field_energy: np.ndarray  # (q^2 + p^2) / 2

    def state(self, i):
        return MeanFieldState(
            rho=self.rhos[i], q=float(self.qs[i]), p=float(self.ps[i]), t=float(self.times[i])
        )

    @property
    def states(self):
        return [self.state(i) for i in range(self.times.size)]


def quadrature_weights(n):
    """Weights integrating n uniform intervals (n+1 samples) to fourth order.

    Endpoint-corrected (Gregory) trapezoidal weights for n >= 6; closed
    Newton-Cotes composites below that.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    small = {
        0: [0.0],
        1: [1 / 2, 1 / 2],
        2: [1 / 3, 4 / 3, 1 / 3],
        3: [3 / 8, 9 / 8, 9 / 8, 3 / 8],
        4: [14 / 45, 64 / 45, 24 / 45, 64 / 45, 14 / 45],
        5: [1 / 3, 4 / 3, 17 / 24, 9 / 8, 9 / 8, 3 / 8],
    }
    if n in small:
        return np.array(small[n])
    w = np.ones(n + 1)
    w[[0, -1]] = 3 / 8
    w[[1, -2]] = 7 / 6
    w[[2, -3]] = 23 / 24
    return w


def hartree_potential(coupling, history, kernel, t, dt):
    """Mean-field potential lambda * int_0^t D0(t - t') s(t') dt'.

    history holds the polarization samples s(t') = tr(lambda rho(t')) on the
    uniform grid 0, dt, ..., covering [0, t]; the integral uses the
    fourth-order corrected trapezoidal weights above.
    """
    n = int(round(t / dt))
    if abs(n * dt - t) > 1e-9 * max(dt, abs(t)):
        raise ConfigError("hartree_potential: t is not on the sample grid")
    s = np.asarray(history, dtype=float)
    if s.size < n + 1:
        raise ConfigError(
            f"hartree_potential: history has {s.size} samples, need {n + 1} to cover [0, t]"
        )
    kern = np.array([d0_retarded(kernel, m * dt) for m in range(n + 1)])
    val = dt * np.dot(quadrature_weights(n) * s[: n + 1], kern[::-1])
    return np.asarray(coupling) * val


def _raising_part(coupling):
    """Strictly lower-triangular block: transitions upward in energy."""
    return np.tril(coupling, k=-1)


class _EffectiveModel:
    """Precomputed pieces of the coupled equations for one propagation."""

    def __init__(self, molecule, cavity, pulse, rwa, cavity_drive):
        self.molecule = molecule
        self.kernel = PhotonKernel(cavity.omega_c, cavity.kappa)
        self.pulse = pulse
        self.rwa = bool(rwa)
        self.cavity_drive = cavity_drive
        self.coupling = molecule.coupling
        self.raising = _raising_part(molecule.coupling)
        self.lowering = self.raising.conj().T
        self.coupled = bool(np.abs(molecule.coupling).max() > 0.0)

    def f_ext(self, t):
        return float(self.cavity_drive(t)) if self.cavity_drive is not None else 0.0

    def h_eff(self, t, q, p):
        h = bare_hamiltonian(self.molecule, self.pulse, t)
        if not self.coupled:
            return h
        if self.rwa:
            alpha = (q + 1j * p) / np.sqrt(2.0)
            return h + alpha * self.raising + np.conj(alpha) * self.lowering
        return h + q * self.coupling

    def source(self, rho):
        """Oscillator source from the molecular polarization.

        Displacement coupling: real tr(lambda rho). Rotating-wave coupling:
        the complex overlap of rho with the raising block.
        """
        if self.rwa:
            return complex(np.vdot(self.raising, rho))
        return float(np.real(np.trace(self.coupling @ rho)))

    def derivatives(self, t, rho, q, p):
        h = self.h_eff(t, q, p)
        drho = -1j * (h @ rho - rho @ h)
        w, k = self.kernel.omega_c, self.kernel.kappa
        f = self.f_ext(t)
        if self.rwa:
            s = self.source(rho)
            dq = w * p - k * q + np.sqrt(2.0) * s.imag
            dp = -w * q - k * p - np.sqrt(2.0) * s.real - f
        else:
            dq = w * p
            dp = -w * q - 2.0 * k * p - self.source(rho) - f
        return drho, dq, dp


def _check_state(t, rho, purity0):
    problem = _state_problem(rho)
    if problem:
        raise InvariantViolation(t, problem)
    purity = float(np.real(np.trace(rho @ rho)))
    if abs(purity - purity0) > PURITY_TOL:
        raise InvariantViolation(
            t, f"purity drifted to {purity:.9g} from {purity0:.9g}"
        )


def _make_trajectory(model, times, rhos, qs, ps):
    rhos = np.asarray(rhos)
    qs = np.asarray(qs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    pops = np.real(np.diagonal(rhos, axis1=1, axis2=2))
    pol = np.real(np.einsum("ij,tji->t", model.coupling, rhos))
    return Trajectory(
        times=times,
        rhos=rhos,
        qs=qs,
        ps=ps,
        populations=pops,
        polarization=pol,
        field_energy=0.5 * (qs**2 + ps**2),
    )


def _propagate_auxiliary(model, grid, init, check, n_stop=None):
    times = grid.times()
    n_steps = grid.n_steps if n_stop is None else n_stop
    dt = grid.dt
    rho, q, p = init.rho.astype(complex), float(init.q), float(init.p)
    purity0 = float(np.real(np.trace(rho @ rho)))
    rhos, qs, ps = [rho], [q], [p]
    for i in range(n_steps):
        t = times[i]
        k1 = model.derivatives(t, rho, q, p)
        k2 = model.derivatives(
            t + 0.5 * dt, rho + 0.5 * dt * k1[0], q + 0.5 * dt * k1[1], p + 0.5 * dt * k1[2]
        )
        k3 = model.derivatives(
            t + 0.5 * dt, rho + 0.5 * dt * k2[0], q + 0.5 * dt * k2[1], p + 0.5 * dt * k2[2]
        )
        k4 = model.derivatives(t + dt, rho + dt * k3[0], q + dt * k3[1], p + dt * k3[2])
        rho = rho + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        q = q + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        p = p + dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        if check:
            _check_state(times[i + 1], rho, purity0)
        rhos.append(rho)
        qs.append(q)
        ps.append(p)
    return _make_trajectory(model, times[: n_steps + 1], rhos, qs, ps)


class _MemoryField:
    """Cavity quadratures reconstructed from the stored source history.

    The convolution with the retarded kernel replaces the oscillator state;
    the homogeneous part carries any nonzero initial (q, p).
    """

    def __init__(self, model, grid):
        self.model = model
        self.dt = grid.dt
        k = model.kernel
        m = np.arange(grid.n_steps + 1)
        if model.rwa:
            self.k_alpha = -1j * np.exp(-(1j * k.omega_c + k.kappa) * m * grid.dt)
        else:
            self.k_q = np.array([d0_retarded(k, s) for s in m * grid.dt])
            self.k_p = np.array([d0_retarded_slope(k, s) for s in m * grid.dt]) / k.omega_c

    def homogeneous(self, q0, p0, t):
        k = self.model.kernel
        w, kap = k.omega_c, k.kappa
        if self.model.rwa:
            alpha0 = (q0 + 1j * p0) / np.sqrt(2.0)
            alpha = alpha0 * np.exp(-(1j * w + kap) * t)
            return np.sqrt(2.0) * alpha.real, np.sqrt(2.0) * alpha.imag
        wt = k.omega_damped
        env = np.exp(-kap * t)
        qh = env * (q0 * np.cos(wt * t) + (w * p0 + kap * q0) / wt * np.sin(wt * t))
        ph = env * (p0 * np.cos(wt * t) - (w * q0 + kap * p0) / wt * np.sin(wt * t))
        return qh, ph

    def _convolve(self, kern, sources, n):
        # corrected-trapezoid dot: full dot plus the six end corrections
        s = sources[: n + 1]
        rev = kern[n::-1]
        if n < 6:
            return self.dt * np.dot(quadrature_weights(n) * s, rev)
        val = np.dot(s, rev)
        for j, w in ((0, 3 / 8), (1, 7 / 6), (2, 23 / 24)):
            val += (w - 1.0) * (s[j] * rev[j] + s[n - j] * rev[n - j])
        return self.dt * val

    def field_at(self, n, sources, q0, p0):
        """(q, p) at grid index n from the first n+1 source samples."""
        qh, ph = self.homogeneous(q0, p0, n * self.dt)
        if n == 0:
            return qh, ph
        if self.model.rwa:
            alpha = self._convolve(self.k_alpha, sources, n)
            return qh + np.sqrt(2.0) * alpha.real, ph + np.sqrt(2.0) * alpha.imag
        q = qh + self._convolve(self.k_q, sources, n)
        p = ph + self._convolve(self.k_p, sources, n)
        return q, p


def _propagate_memory(model, grid, init, check):
    times = grid.times()
    n_steps = grid.n_steps
    dt = grid.dt
    q0, p0 = float(init.q), float(init.p)
    purity0 = float(np.real(np.trace(init.rho @ init.rho)))
    field = _MemoryField(model, grid)

    # the multistep scheme needs four starting values; a one-step bootstrap
    # on the equivalent auxiliary system supplies them
    n_boot = min(3, n_steps)
    boot = _propagate_auxiliary(model, grid, init, check=False, n_stop=n_boot)

    rhos = [boot.rhos[i] for i in range(n_boot + 1)]
    qs, ps = [], []
    sources = np.zeros(n_steps + 1, dtype=complex if model.rwa else float)

    def total_source(t, s):
        # external cavity force enters the same convolution as the polarization
        f = model.f_ext(t)
        if model.rwa:
            return s + f / np.sqrt(2.0)
        return s + f

    for i in range(n_boot + 1):
        sources[i] = total_source(times[i], model.source(rhos[i]))

    def rho_rhs(t, rho, q, p):
        h = model.h_eff(t, q, p)
        return -1j * (h @ rho - rho @ h)

    f_hist = []
    for i in range(n_boot + 1):
        q, p = field.field_at(i, sources, q0, p0)
        qs.append(q)
        ps.append(p)
        f_hist.append(rho_rhs(times[i], rhos[i], q, p))
        if check:
            _check_state(times[i], rhos[i], purity0)

    for n in range(n_boot, n_steps):
        t_next = times[n + 1]
        rho_n = rhos[n]
        # Adams-Bashforth predictor
        rho_pred = rho_n + dt / 24.0 * (
            55 * f_hist[n] - 59 * f_hist[n - 1] + 37 * f_hist[n - 2] - 9 * f_hist[n - 3]
        )
        sources[n + 1] = total_source(t_next, model.source(rho_pred))
        q_next, p_next = field.field_at(n + 1, sources, q0, p0)
        f_pred = rho_rhs(t_next, rho_pred, q_next, p_next)
        # Adams-Moulton corrector
        rho_next = rho_n + dt / 24.0 * (
            9 * f_pred + 19 * f_hist[n] - 5 * f_hist[n - 1] + f_hist[n - 2]
        )
        sources[n + 1] = total_source(t_next, model.source(rho_next))
        q_next, p_next = field.field_at(n + 1, sources, q0, p0)
        if check:
            _check_state(t_next, rho_next, purity0)
        rhos.append(rho_next)
        qs.append(q_next)
        ps.append(p_next)
        f_hist.append(rho_rhs(t_next, rho_next, q_next, p_next))

    return _make_trajectory(model, times, rhos, qs, ps)


def propagate_meanfield(
    molecule,
    cavity,
    pulse,
    grid,
    init=None,
    backend="auxiliary",
    rwa=False,
    cavity_drive=None,
    check_invariants=True,
):
    """Propagate the self-consistent molecule + mean cavity field system.

    backend: 'auxiliary' co-integrates the oscillator, 'memory' convolves
    the stored polarization history against the retarded kernel. rwa=True
    switches the coupling to the secular Tavis-Cummings form (used for
    benchmarks against the exact solver). cavity_drive, if given, is a
    callable returning the external cavity force already scaled by
    1/sqrt(N).

    Trajectories depend on the coupling matrix only, never on an ensemble
    size: the scaled quadratures absorb all sqrt(N) factors.
    """
    if init is None:
        init = ground_state(molecule)
    if init.rho.shape[0] != molecule.n_levels:
        raise ConfigError("init.rho: dimension does not match the molecule")
    model = _EffectiveModel(molecule, cavity, pulse, rwa, cavity_drive)
    if backend == "auxiliary":
        return _propagate_auxiliary(model, grid, init, check_invariants)
    if backend == "memory":
        return _propagate_memory(model, grid, init, check_invariants)
    raise ConfigError(f"backend: unknown backend {backend!r}")


def bare_molecule_reference(molecule, pulse, grid, init=None):
    """Same propagation with the cavity coupling switched off entirely."""
    bare = MolecularModel(
        energies=molecule.energies,
        coupling=np.zeros_like(molecule.coupling),
        dipole=molecule.dipole,
    )
    return propagate_meanfield(bare, CavityMode(omega_c=1.0), pulse, grid, init=init)


def energy_functional(molecule, cavity, traj):
    """Conserved energy of the undriven, undamped displacement-coupled system:

    tr(h0 rho) + omega_c (q^2 + p^2)/2 + q tr(lambda rho).
    """
    h0 = np.diag(molecule.energies)
    e_mol = np.real(np.einsum("ij,tji->t", h0, traj.rhos))
    return e_mol + cavity.omega_c * traj.field_energy + traj.qs * traj.polarization
