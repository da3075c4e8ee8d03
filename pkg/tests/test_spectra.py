import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poldyn.errors import ConfigError
from poldyn.model import CavityMode, DisorderSpec, MolecularModel, two_level
from poldyn.spectra import (
    FrequencyGrid,
    bare_particle_gf,
    bare_photon_gf,
    disorder_polarization_gaussian,
    disorder_polarization_quadrature,
    dyson_photon,
    find_peaks,
    polarization_bubble,
    rabi_poles,
    transmission_spectrum,
)


class TestBareParticleGF:
    def test_on_resonance(self):
        assert bare_particle_gf(1.0, 1.0, 0.01) == pytest.approx(-1j / 0.01)

    def test_asymptotic(self):
        g = bare_particle_gf(5.0, 1.0, 1e-6)
        assert g.real == pytest.approx(1.0 / 4.0, rel=1e-9)
        assert abs(g.imag) < 1e-6

    def test_eta_required(self):
        with pytest.raises(ConfigError):
            bare_particle_gf(1.0, 1.0, 0.0)

    def test_kramers_kronig(self):
        # Re g from the Hilbert transform of Im g, principal value taken on
        # a staggered grid so the singular point is never sampled
        omega0, eta = 1.0, 0.05
        w_probe = 1.3
        wp = np.arange(-400.0, 400.0, 0.001) + 0.0005
        img = bare_particle_gf(wp, omega0, eta).imag
        hilbert = np.trapezoid(img / (wp - w_probe), wp) / math.pi
        assert hilbert == pytest.approx(
            bare_particle_gf(w_probe, omega0, eta).real, abs=2e-4
        )


class TestPolarizationBubble:
    def test_two_level_value(self):
        mol = two_level(1.0, 0.1)
        val = polarization_bubble(mol, 1.5, 1e-9)
        assert val.real == pytest.approx(0.01 / 0.5, rel=1e-6)

    def test_uncoupled_vanishes(self):
        mol = two_level(1.0, 0.0)
        assert polarization_bubble(mol, 1.3, 1e-4) == 0.0

    def test_three_level_fft_oracle(self):
        # time-domain product i sum |lam_i0|^2 g_d(t) g_h(t), Fourier
        # transformed on a fine grid; each bare GF carries eta/2 so the
        # product matches the frequency-domain form at eta
        energies = [0.0, 0.9, 1.4]
        lam1, lam2 = 0.07, 0.12
        coupling = np.zeros((3, 3), dtype=complex)
        coupling[1, 0] = coupling[0, 1] = lam1
        coupling[2, 0] = coupling[0, 2] = lam2
        mol = MolecularModel(energies=energies, coupling=coupling, dipole=np.eye(3))
        eta = 0.02
        dt, n_t = 0.01, 2**18
        ts = dt * np.arange(n_t)
        pi_t = np.zeros(n_t, dtype=complex)
        for e_i, lam in ((0.9, lam1), (1.4, lam2)):
            g_d = -1j * np.exp(-1j * e_i * ts - 0.5 * eta * ts)
            g_h = -1j * np.exp(-0.5 * eta * ts)  # hole at the ground level
            pi_t += 1j * lam**2 * g_d * g_h
        # Pi(w) = int_0^inf Pi(t) e^{i w t} dt via FFT; the t = 0 sample of
        # the step-function integrand carries trapezoidal half weight
        freqs = 2 * math.pi * np.fft.fftfreq(n_t, dt)
        pi_w = (np.fft.ifft(pi_t) * n_t - 0.5 * pi_t[0]) * dt
        for w_probe in (0.5, 0.95, 1.2, 1.45, 2.0):
            k = np.argmin(np.abs(freqs - w_probe))
            expected = polarization_bubble(mol, freqs[k], eta)
            assert pi_w[k] == pytest.approx(expected, rel=5e-3)


class TestDyson:
    def test_zero_polarization(self):
        f0 = bare_photon_gf(1.2, CavityMode(1.0, 0.0), 1e-3)
        assert dyson_photon(f0, 0.0) == f0

    def test_zero_bare_rejected(self):
        with pytest.raises(ConfigError):
            dyson_photon(0.0, 0.1)

    def test_poles_match_secular_equation(self):
        # denominator roots of the dressed GF equal the quadratic roots
        w0 = wc = 1.0
        lam = 0.1
        lo, hi = rabi_poles(w0, wc, lam)
        assert (lo, hi) == (pytest.approx(0.9), pytest.approx(1.1))
        for w in (lo, hi):
            denom = w - wc - lam**2 / (w - w0)
            assert abs(denom) < 1e-12


class TestRabiPoles:
    def test_resonant(self):
        assert rabi_poles(1.0, 1.0, 0.1) == (pytest.approx(0.9), pytest.approx(1.1))

    def test_decoupled_detuned(self):
        assert rabi_poles(1.0, 1.2, 0.0) == (pytest.approx(1.0), pytest.approx(1.2))

    def test_detuned(self):
        lo, hi = rabi_poles(1.0, 1.2, 0.1)
        half = math.sqrt(0.01 + 0.01)
        assert lo == pytest.approx(1.1 - half)
        assert hi == pytest.approx(1.1 + half)

    @given(
        w0=st.floats(0.2, 3.0),
        wc=st.floats(0.2, 3.0),
        lam=st.floats(0.0, 0.5),
    )
    @settings(max_examples=50, deadline=None)
    def test_against_numpy_roots(self, w0, wc, lam):
        lo, hi = rabi_poles(w0, wc, lam)
        # the quadratic has real roots; np.roots may leave rounding-level
        # imaginary parts on degenerate pairs
        roots = np.sort(np.roots([1.0, -(w0 + wc), w0 * wc - lam**2]).real)
        assert lo == pytest.approx(roots[0], rel=1e-9, abs=1e-9)
        assert hi == pytest.approx(roots[1], rel=1e-9, abs=1e-9)


class TestDisorderPolarization:
    def test_delta_distribution_limit(self):
        d = DisorderSpec(kind="gaussian", sigma=1e-6 * 0.1, gamma=1e-4)
        val = disorder_polarization_quadrature(d, 0.1, 1.5, omega0=1.0)
        ref = 0.1**2 / (0.5 + 1j * 1e-4)
        assert abs(val - ref) / abs(ref) < 1e-4

    def test_symmetric_point_real_part_vanishes(self):
        d = DisorderSpec(kind="gaussian", sigma=0.05, gamma=1e-6)
        val = disorder_polarization_quadrature(d, 0.1, 1.0, omega0=1.0)
        assert abs(val.real) < 1e-10

    def test_closed_form_on_axis(self):
        sigma, lam = 0.03, 0.1
        val = disorder_polarization_gaussian(sigma, 1.0, lam, 1.0)
        assert val == pytest.approx(-1j * lam**2 * math.sqrt(math.pi / 2) / sigma)

    def test_closed_form_far_wing_asymptote(self):
        sigma, lam = 0.02, 0.1
        w = 1.0 + 40 * sigma
        val = disorder_polarization_gaussian(sigma, 1.0, lam, w)
        assert val.real == pytest.approx(lam**2 / (w - 1.0), rel=1e-3)
        assert abs(val.imag) < 1e-100

    @pytest.mark.parametrize("s_over_l", [0.1, 0.5, 1.0, 2.0, 5.0])
    def test_quadrature_matches_closed_form(self, s_over_l):
        lam = 0.1
        sigma = lam * s_over_l
        d = DisorderSpec(kind="gaussian", sigma=sigma, gamma=1e-9)
        for w in np.linspace(1.0 - 10 * sigma, 1.0 + 10 * sigma, 15):
            qd = disorder_polarization_quadrature(d, lam, float(w), omega0=1.0)
            cf = disorder_polarization_gaussian(sigma, 1.0, lam, float(w))
            assert abs(qd - cf) / abs(cf) < 1e-6

    def test_sampled_disorder(self):
        d = DisorderSpec(kind="samples", samples=(0.95, 1.05), gamma=1e-3)
        val = disorder_polarization_quadrature(d, 0.1, 1.2, omega0=1.0)
        ref = 0.01 * 0.5 * (1 / (0.25 + 1e-3j) + 1 / (0.15 + 1e-3j))
        assert val == pytest.approx(ref, rel=1e-12)

    def test_sigma_validation(self):
        with pytest.raises(ConfigError):
            disorder_polarization_gaussian(0.0, 1.0, 0.1, 1.0)


class TestTransmissionSpectrum:
    def test_clean_resonant_rabi_splitting(self):
        mol = two_level(1.0, 0.1)
        cav = CavityMode(1.0, 0.005)
        grid = FrequencyGrid(0.7, 1.3, 4001, eta=1e-4)
        sp = transmission_spectrum(mol, cav, grid)
        assert sp.peak_positions.size == 2
        assert sp.splitting == pytest.approx(0.2, abs=1e-4)
        assert sp.a.min() >= -1e-12

    def test_strong_disorder_washes_out_splitting(self):
        mol = two_level(1.0, 0.1)
        d = DisorderSpec(kind="gaussian", sigma=0.5, gamma=1e-6)
        grid = FrequencyGrid(0.0, 2.0, 4001, eta=1e-4)
        sp = transmission_spectrum(mol, CavityMode(1.0, 0.002), grid, disorder=d)
        assert not sp.resolved_splitting

    def test_moderate_disorder_widens_splitting(self):
        mol = two_level(1.0, 0.1)
        grid = FrequencyGrid(0.5, 1.5, 6001, eta=1e-4)
        cav = CavityMode(1.0, 0.002)
        clean = transmission_spectrum(mol, cav, grid)
        d = DisorderSpec(kind="gaussian", sigma=0.03, gamma=1e-6)
        disordered = transmission_spectrum(mol, cav, grid, disorder=d)
        assert disordered.splitting > clean.splitting

    def test_spectral_sum_rule(self):
        # integral of A over a wide grid approaches 1 (single-excitation weight)
        mol = two_level(1.0, 0.1)
        grid = FrequencyGrid(-40.0, 42.0, 400001, eta=2e-3)
        sp = transmission_spectrum(mol, CavityMode(1.0, 0.01), grid)
        total = np.trapezoid(sp.a, sp.omegas)
        assert total == pytest.approx(1.0, abs=0.01)

    def test_empty_cavity_lorentzian_hwhm(self):
        kappa = 0.02
        mol = two_level(1.0, 0.0)
        grid = FrequencyGrid(0.8, 1.2, 40001, eta=1e-7)
        sp = transmission_spectrum(mol, CavityMode(1.0, kappa), grid)
        half = 0.5 * sp.a.max()
        above = sp.omegas[sp.a >= half]
        hwhm = 0.5 * (above[-1] - above[0])
        assert hwhm == pytest.approx(kappa, rel=0.01)

    def test_quadrature_method_agrees(self):
        mol = two_level(1.0, 0.1)
        d = DisorderSpec(kind="gaussian", sigma=0.05, gamma=1e-6)
        grid = FrequencyGrid(0.8, 1.2, 101, eta=1e-4)
        cav = CavityMode(1.0, 0.002)
        cf = transmission_spectrum(mol, cav, grid, disorder=d, method="closed-form")
        qd = transmission_spectrum(mol, cav, grid, disorder=d, method="quadrature")
        assert np.abs(cf.pi_retarded - qd.pi_retarded).max() < 1e-5

    def test_disorder_requires_two_level(self):
        coupling = np.zeros((3, 3))
        mol = MolecularModel([0.0, 1.0, 1.5], coupling, np.eye(3))
        d = DisorderSpec(kind="gaussian", sigma=0.05)
        grid = FrequencyGrid(0.5, 1.5, 101)
        with pytest.raises(ConfigError, match="two-level"):
            transmission_spectrum(mol, CavityMode(1.0), grid, disorder=d)

    @given(
        lam=st.floats(0.01, 0.3),
        kappa=st.floats(0.0, 0.05),
        sigma=st.floats(0.005, 0.5),
    )
    @settings(max_examples=20, deadline=None)
    def test_spectral_positivity(self, lam, kappa, sigma):
        mol = two_level(1.0, lam)
        d = DisorderSpec(kind="gaussian", sigma=sigma, gamma=1e-5)
        grid = FrequencyGrid(0.3, 1.7, 801, eta=1e-4)
        sp = transmission_spectrum(mol, CavityMode(1.0, kappa), grid, disorder=d)
        assert sp.a.min() >= -1e-12


class TestPeakFinding:
    def test_two_lorentzians(self):
        xs = np.linspace(0.0, 2.0, 2001)
        a = 1.0 / ((xs - 0.8) ** 2 + 1e-4) + 0.5 / ((xs - 1.3) ** 2 + 1e-4)
        pos, heights, narrow = find_peaks(xs, a)
        assert pos.size == 2
        assert pos[0] == pytest.approx(0.8, abs=1e-4)
        assert pos[1] == pytest.approx(1.3, abs=1e-3)
        assert not narrow

    def test_narrow_peak_warning(self):
        xs = np.linspace(0.0, 2.0, 101)
        a = 1.0 / ((xs - 1.0) ** 2 + 1e-8)
        _, _, narrow = find_peaks(xs, a)
        assert narrow

    def test_small_bumps_ignored(self):
        xs = np.linspace(0.0, 1.0, 501)
        a = np.exp(-((xs - 0.5) ** 2) / 1e-3) + 1e-4 * np.sin(40 * xs) ** 2
        pos, _, _ = find_peaks(xs, a)
        assert pos.size == 1
