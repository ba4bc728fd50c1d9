"""Expectation values, photon statistics, correlations and spectra."""

import math

import numpy as np
import pytest

from drivenarrays.hilbert import build_fock_space, site_operator
from drivenarrays.liouville import liouvillian, steady_state
from drivenarrays.models import (BHParams, bh_hamiltonian, excitation_block,
                                 resonance_detuning_bh)
from drivenarrays.observables import (CorrelationSeries, autocorrelation,
                                      double_occupancy_profile,
                                      emission_spectrum, expectation, g2_local,
                                      g2_pure, number_variance, ridge_crossing,
                                      spectral_peaks)


def coherent_rho(space, alpha):
    n = np.arange(space.dim)
    v = alpha ** n / np.sqrt(np.array(
        [math.factorial(int(k)) for k in n], dtype=float))
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj()), v


class TestExpectation:
    def test_vacuum_number(self):
        space = build_fock_space(1, 3)
        rho = np.zeros((space.dim, space.dim))
        rho[0, 0] = 1.0
        assert expectation(rho, site_operator(space, 0, "number")) == 0.0

    def test_coherent_annihilation(self):
        space = build_fock_space(1, 24)
        rho, _ = coherent_rho(space, 0.6 + 0.3j)
        a = site_operator(space, 0, "annihilate")
        assert expectation(rho, a) == pytest.approx(0.6 + 0.3j, abs=1e-8)

    def test_hermitian_real(self):
        space = build_fock_space(1, 3)
        rng = np.random.default_rng(5)
        X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = X @ X.conj().T
        rho /= np.trace(rho)
        val = expectation(rho, site_operator(space, 0, "number"))
        assert abs(val.imag) < 1e-12


class TestG2:
    def test_fock_states(self):
        space = build_fock_space(1, 4)
        for n, expect in ((1, 0.0), (2, 0.5)):
            rho = np.zeros((space.dim, space.dim))
            rho[n, n] = 1.0
            assert g2_local(rho, space, 0) == pytest.approx(expect, abs=1e-12)

    def test_coherent_state(self):
        space = build_fock_space(1, 30)
        rho, v = coherent_rho(space, 0.7)
        assert g2_local(rho, space, 0) == pytest.approx(1.0, abs=1e-9)
        assert g2_pure(v, space, 0) == pytest.approx(1.0, abs=1e-9)

    def test_vacuum_undefined(self):
        space = build_fock_space(1, 3)
        rho = np.zeros((space.dim, space.dim))
        rho[0, 0] = 1.0
        with pytest.raises(ValueError):
            g2_local(rho, space, 0)


class TestNumberVariance:
    def test_fock_one(self):
        space = build_fock_space(1, 3)
        rho = np.zeros((space.dim, space.dim))
        rho[1, 1] = 1.0
        assert number_variance(rho, space, 0) == pytest.approx(0.0, abs=1e-12)

    def test_coherent(self):
        space = build_fock_space(1, 30)
        rho, _ = coherent_rho(space, 0.9)
        assert number_variance(rho, space, 0) == pytest.approx(0.81, abs=1e-8)

    def test_linear_dimer_two_photon_ground(self):
        # (|20> + |02> + sqrt(2)|11>)/2: per-site variance 1/2
        space = build_fock_space(2, 2)
        v = np.zeros(space.dim)
        v[space.index((2, 0))] = 0.5
        v[space.index((0, 2))] = 0.5
        v[space.index((1, 1))] = np.sqrt(2.0) / 2.0
        rho = np.outer(v, v)
        assert number_variance(rho, space, 0) == pytest.approx(0.5, abs=1e-12)


class TestDoubleOccupancy:
    def test_linear_symmetric_states(self):
        space = build_fock_space(2, 2)
        p = BHParams(M=2, J=1.0, U=0.0, Omega=0.0, Delta_c=0.0)
        block, idx = excitation_block(bh_hamiltonian(p, space), space, 2)
        w, V = np.linalg.eigh(block.dense())
        for k in (0, 2):    # |2-> and |2+>
            vec = np.zeros(space.dim, dtype=complex)
            vec[idx] = V[:, k]
            assert double_occupancy_profile(vec, space) == pytest.approx(
                0.5, abs=1e-12)

    def test_u_equals_j(self):
        space = build_fock_space(2, 2)
        p = BHParams(M=2, J=1.0, U=1.0, Omega=0.0, Delta_c=0.0)
        block, idx = excitation_block(bh_hamiltonian(p, space), space, 2)
        w, V = np.linalg.eigh(block.dense())
        vals = []
        for k in (0, 2):
            vec = np.zeros(space.dim, dtype=complex)
            vec[idx] = V[:, k]
            vals.append(double_occupancy_profile(vec, space))
        # lower symmetric state leans on |11>, upper one on double occupancy
        assert vals[0] == pytest.approx(0.2764, abs=1e-4)
        assert vals[1] == pytest.approx(0.7236, abs=1e-4)


def driven_cavity_steady(Delta_c=0.0, Omega=0.2, n_max=8):
    space = build_fock_space(1, n_max)
    p = BHParams(M=1, J=0.0, U=0.0, Omega=Omega, Delta_c=Delta_c)
    H = bh_hamiltonian(p, space)
    a = site_operator(space, 0, "annihilate")
    L = liouvillian(H, [a], [1.0])
    return space, L, steady_state(L)


class TestAutocorrelation:
    def test_vacuum_zero(self):
        space, L, _ = driven_cavity_steady(Omega=0.0)
        rho = np.zeros((space.dim, space.dim), dtype=complex)
        rho[0, 0] = 1.0
        # undriven cavity: S(tau) identically zero
        series = autocorrelation(rho, L, space, 0, 5.0, 64)
        np.testing.assert_allclose(series.values, 0.0, atol=1e-14)

    def test_initial_value_is_population(self):
        space, L, rho = driven_cavity_steady(Omega=0.25)
        series = autocorrelation(rho, L, space, 0, 5.0, 64)
        n = site_operator(space, 0, "number")
        assert series.values[0] == pytest.approx(
            expectation(rho, n).real, abs=1e-10)

    def test_resonant_linear_cavity_constant(self):
        # coherent steady state: S(tau) = |alpha|^2 for all tau
        space, L, rho = driven_cavity_steady(Delta_c=0.0, Omega=0.2)
        series = autocorrelation(rho, L, space, 0, 8.0, 128)
        np.testing.assert_allclose(series.values, 0.16, rtol=1e-5)

    def test_tmax_property(self):
        space, L, rho = driven_cavity_steady()
        series = autocorrelation(rho, L, space, 0, 12.0, 64)
        assert series.t_max == pytest.approx(12.0)
        assert len(series.tau_grid) == 64


class TestEmissionSpectrum:
    def test_coherent_subtraction_kills_constant(self):
        space, L, rho = driven_cavity_steady(Delta_c=0.0, Omega=0.2)
        series = autocorrelation(rho, L, space, 0, 20.0, 256)
        raw = emission_spectrum(series, subtract_coherent=False)
        sub = emission_spectrum(series, subtract_coherent=True)
        assert sub.power.max() < 1e-12 * raw.power.max()

    def test_resolution(self):
        series = CorrelationSeries(tau_grid=np.arange(128) * (30.0 / 128),
                                   values=np.zeros(128, dtype=complex))
        spec = emission_spectrum(series, subtract_coherent=False)
        assert spec.resolution == pytest.approx(2 * np.pi / 30.0)
        assert np.allclose(np.diff(spec.omega_grid), spec.resolution)

    def test_kerr_cavity_line_position(self):
        # weakly driven Kerr site: fluctuation line at the one-photon
        # transition frequency +Delta_c above the drive
        space = build_fock_space(1, 4)
        p = BHParams(M=1, J=0.0, U=3.0, Omega=0.05, Delta_c=2.0)
        H = bh_hamiltonian(p, space)
        a = site_operator(space, 0, "annihilate")
        L = liouvillian(H, [a], [1.0])
        rho = steady_state(L)
        series = autocorrelation(rho, L, space, 0, 40.0, 1024)
        spec = emission_spectrum(series)
        peaks = spectral_peaks(spec, 1e-3 * spec.power.max(), refine=True)
        assert np.min(np.abs(peaks - 2.0)) < spec.resolution

    def test_dimer_one_photon_lines(self):
        J, U, Omega = 10.0, 5.0, 0.3
        space = build_fock_space(2, 4)
        p = BHParams(M=2, J=J, U=U, Omega=Omega)
        dc = p.resolved_detuning()
        assert dc == pytest.approx((np.sqrt(425.0) - 5.0) / 2.0, abs=1e-12)
        H = bh_hamiltonian(p, space)
        ops = [site_operator(space, j, "annihilate") for j in range(2)]
        L = liouvillian(H, ops, [1.0, 1.0])
        rho = steady_state(L)
        series = autocorrelation(rho, L, space, 0, 20.0, 4096)
        spec = emission_spectrum(series)
        peaks = spectral_peaks(spec, 1e-4 * spec.power.max(), refine=True)
        # at this drive strength the lines acquire an O(Omega^2) light
        # shift of ~0.8 bins, so a peak must land in the predicted bin or
        # an adjacent one
        for target in (dc - J, dc + J):
            assert np.min(np.abs(peaks - target)) < 1.5 * spec.resolution


class TestRidgeCrossing:
    @staticmethod
    def synthetic_scan(cross=True):
        # two Lorentzian ridges, one fixed at 10, one moving with u
        omega = np.fft.fftshift(2 * np.pi * np.fft.fftfreq(512, 20.0 / 512))
        u_grid = np.linspace(0.0, 1.0, 11)
        spectra = []
        from drivenarrays.observables import SpectrumResult
        for u in u_grid:
            mov = 4.0 + (8.0 if cross else 2.0) * u
            # narrow weak ridge so it stays a local maximum on the flank
            # of the bright line until the exclusion window absorbs it
            power = (1.0 / (1.0 + (omega - 10.0) ** 2)
                     + 0.5 / (1.0 + ((omega - mov) / 0.3) ** 2))
            spectra.append(SpectrumResult(omega_grid=omega, power=power,
                                          t_max=20.0, samples=512,
                                          coherent_subtracted=True))
        return spectra, u_grid

    def test_detects_synthetic_crossing(self):
        spectra, u_grid = self.synthetic_scan(cross=True)
        res = ridge_crossing(spectra, u_grid, [10.0] * len(u_grid))
        assert res.found
        assert res.u_star == pytest.approx(0.75, abs=0.1)

    def test_no_crossing(self):
        spectra, u_grid = self.synthetic_scan(cross=False)
        res = ridge_crossing(spectra, u_grid, [10.0] * len(u_grid))
        assert not res.found

    def test_predicted_line_mode(self):
        spectra, u_grid = self.synthetic_scan(cross=False)
        line = 8.0 + 4.0 * u_grid
        res = ridge_crossing(spectra, u_grid, [10.0] * len(u_grid),
                             line_freqs=line)
        assert res.found
        assert res.u_star == pytest.approx(0.5, abs=0.05)

    def test_coalesced_lines_no_crossing(self):
        # J below the linewidth: single central feature, nothing to cross
        space = build_fock_space(2, 3)
        u_grid = np.array([5.0, 10.0, 15.0, 20.0])
        spectra, b_freqs = [], []
        for U in u_grid:
            p = BHParams(M=2, J=0.5, U=float(U), Omega=0.3)
            H = bh_hamiltonian(p, space)
            ops = [site_operator(space, j, "annihilate") for j in range(2)]
            L = liouvillian(H, ops, [1.0, 1.0])
            rho = steady_state(L)
            series = autocorrelation(rho, L, space, 0, 20.0, 512)
            spectra.append(emission_spectrum(series))
            b_freqs.append(p.resolved_detuning() + 0.5)
        res = ridge_crossing(spectra, u_grid, b_freqs)
        assert not res.found
