import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from poldyn.errors import ConfigError
from poldyn.photon import (
    PhotonKernel,
    d0_retarded,
    d0_retarded_slope,
    step_auxiliary_oscillator,
)


class TestBareKernel:
    def test_zero_at_origin(self):
        assert d0_retarded(PhotonKernel(1.0), 0.0) == 0.0

    def test_quarter_period(self):
        assert d0_retarded(PhotonKernel(1.0), math.pi / 2) == pytest.approx(-1.0)

    def test_retardation_enforced(self):
        with pytest.raises(ValueError):
            d0_retarded(PhotonKernel(1.0), -0.1)

    def test_greens_identity(self):
        # omega^-1 (-d^2/ds^2 - omega^2) applied to the kernel must vanish
        # away from s = 0 and carry a unit impulse at s = 0+
        w = 1.3
        k = PhotonKernel(w)
        h = 1e-4
        for s in np.linspace(0.3, 9.0, 25):
            second = (
                d0_retarded(k, s + h) - 2 * d0_retarded(k, s) + d0_retarded(k, s - h)
            ) / h**2
            residual = (-second - w**2 * d0_retarded(k, s)) / w
            assert abs(residual) < 1e-6
        # jump condition: K'(0+) = -omega reproduces the delta on integration
        slope = (d0_retarded(k, h) - d0_retarded(k, 0.0)) / h
        assert slope == pytest.approx(-w, rel=1e-6)

    def test_impulse_response_oracle(self):
        # independent ODE route: kick the oscillator and compare trajectories
        w = 0.9
        k = PhotonKernel(w)
        sol = solve_ivp(
            lambda t, y: [y[1], -w**2 * y[0]],
            (0.0, 12.0),
            [0.0, -w],  # delta kick: phi(0)=0, phi'(0) = -omega
            rtol=1e-11,
            atol=1e-13,
            dense_output=True,
        )
        for s in np.linspace(0.0, 12.0, 40):
            assert d0_retarded(k, s) == pytest.approx(sol.sol(s)[0], abs=1e-8)

    def test_damped_kernel_matches_oscillator_greens_function(self):
        w, kap = 1.0, 0.2
        k = PhotonKernel(w, kap)
        sol = solve_ivp(
            lambda t, y: [y[1], -(w**2) * y[0] - 2 * kap * y[1]],
            (0.0, 15.0),
            [0.0, -w],
            rtol=1e-11,
            atol=1e-13,
            dense_output=True,
        )
        for s in np.linspace(0.0, 15.0, 40):
            assert d0_retarded(k, s) == pytest.approx(sol.sol(s)[0], abs=1e-8)

    def test_slope_consistent(self):
        k = PhotonKernel(1.1, 0.05)
        h = 1e-6
        for s in (0.5, 2.0, 7.3):
            fd = (d0_retarded(k, s + h) - d0_retarded(k, s - h)) / (2 * h)
            assert d0_retarded_slope(k, s) == pytest.approx(fd, rel=1e-7)

    def test_overdamped_rejected(self):
        with pytest.raises(ConfigError):
            PhotonKernel(1.0, kappa=1.0)


class TestAuxiliaryOscillator:
    def test_fixed_point(self):
        k = PhotonKernel(1.0)
        assert step_auxiliary_oscillator((0.0, 0.0), 0.0, 0.0, k, 0.01) == (0.0, 0.0)

    def test_free_harmonic_motion(self):
        w = 1.0
        k = PhotonKernel(w)
        dt = 0.01
        q, p = 1.0, 0.0
        n = int(round(2 * math.pi / dt))
        for i in range(n):
            q, p = step_auxiliary_oscillator((q, p), 0.0, 0.0, k, dt)
        assert q == pytest.approx(math.cos(w * n * dt), abs=1e-8)

    def test_damped_envelope(self):
        # envelope decays as exp(-kappa t) within 1% over 5 periods
        w, kap = 1.0, 0.05
        k = PhotonKernel(w, kap)
        dt = 0.01 / w
        wt = k.omega_damped
        q, p = 1.0, 0.0
        t = 0.0
        period = 2 * math.pi / wt
        checkpoints = {round(m * period / dt): m * period for m in range(1, 6)}
        for i in range(1, max(checkpoints) + 1):
            q, p = step_auxiliary_oscillator((q, p), 0.0, 0.0, k, dt)
            if i in checkpoints:
                t = checkpoints[i]
                # at full damped periods q(t) = exp(-kappa t) exactly
                assert abs(q - math.exp(-kap * t)) <= 0.01 * math.exp(-kap * t)

    def test_energy_conservation_long_run(self):
        # kappa = 0, no sources: q^2 + p^2 conserved to 1e-8 over 1e3 periods
        w = 1.0
        k = PhotonKernel(w)
        dt = 0.01 / w
        q, p = 1.0, 0.0
        n = int(round(1e3 * 2 * math.pi / dt))
        for _ in range(n):
            q, p = step_auxiliary_oscillator((q, p), 0.0, 0.0, k, dt)
        assert abs(q * q + p * p - 1.0) <= 1e-8
