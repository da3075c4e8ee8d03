"""Bare and damped retarded photon propagators for the displacement field.

The bare kernel D0(s) = -sin(omega_c s) for s >= 0 is the retarded Green's
function of the oscillator identity operator omega_c^-1 (-d^2/ds^2 - omega_c^2).
Markovian cavity decay enters as a velocity damping -2 kappa p on the
auxiliary oscillator, equivalently an exp(-kappa s) envelope on the kernel;
the amplitude decay rate is kappa and the empty-cavity spectral line has
HWHM kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class PhotonKernel:
    """Retarded photon kernel parameters.

    form selects the default propagation backend ('memory' evaluates the
    kernel convolution over the stored source history, 'auxiliary'
    co-integrates the oscillator).
    """

    omega_c: float
    kappa: float = 0.0
    form: str = "auxiliary"

    def __post_init__(self):
        if self.omega_c <= 0:
            raise ConfigError("kernel.omega_c: must be > 0")
        if self.kappa < 0:
            raise ConfigError("kernel.kappa: must be >= 0")
        if self.kappa >= self.omega_c:
            raise ConfigError("kernel.kappa: underdamped regime requires kappa < omega_c")
        if self.form not in ("memory", "auxiliary"):
            raise ConfigError(f"kernel.form: unknown form {self.form!r}")

    @property
    def omega_damped(self):
        return math.sqrt(self.omega_c**2 - self.kappa**2)


def d0_retarded(kernel, s):
    """Retarded displacement-field propagator D0(s), s >= 0.

    kappa = 0: -sin(omega_c s). kappa > 0: the exact impulse response of the
    damped oscillator, -(omega_c/omega_damped) exp(-kappa s) sin(omega_damped s),
    whose prefactor keeps it identical to the auxiliary-oscillator backend.
    """
    if s < 0:
        raise ValueError("retarded kernel: s must be >= 0")
    if kernel.kappa == 0.0:
        return -math.sin(kernel.omega_c * s)
    wt = kernel.omega_damped
    return -(kernel.omega_c / wt) * math.exp(-kernel.kappa * s) * math.sin(wt * s)


def d0_retarded_slope(kernel, s):
    """d D0 / ds, used to reconstruct the conjugate quadrature p = q'/omega_c."""
    if s < 0:
        raise ValueError("retarded kernel: s must be >= 0")
    w = kernel.omega_c
    if kernel.kappa == 0.0:
        return -w * math.cos(w * s)
    k, wt = kernel.kappa, kernel.omega_damped
    env = math.exp(-k * s)
    return -(w / wt) * env * (wt * math.cos(wt * s) - k * math.sin(wt * s))


def _oscillator_rhs(q, p, source, f_ext, kernel):
    dq = kernel.omega_c * p
    dp = -kernel.omega_c * q - 2.0 * kernel.kappa * p - f_ext - source
    return dq, dp


def step_auxiliary_oscillator(state, source, f_ext, kernel, dt):
    """Advance (q, p) one classical RK4 step of

        q' = omega_c p,   p' = -omega_c q - 2 kappa p - f_ext - source

    with source and f_ext held constant over the step. Drift-free (energy
    conserved to integrator order) for kappa = 0 and no sources.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    q, p = state
    k1q, k1p = _oscillator_rhs(q, p, source, f_ext, kernel)
    k2q, k2p = _oscillator_rhs(q + 0.5 * dt * k1q, p + 0.5 * dt * k1p, source, f_ext, kernel)
    k3q, k3p = _oscillator_rhs(q + 0.5 * dt * k2q, p + 0.5 * dt * k2p, source, f_ext, kernel)
    k4q, k4p = _oscillator_rhs(q + dt * k3q, p + dt * k3p, source, f_ext, kernel)
    q_new = q + dt / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q)
    p_new = p + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
    return q_new, p_new
