"""Tests for the water-filling solvers, capacities and the grid oracle.

Reference values are cross-checked against a dense trapezoidal
integration oracle defined inline (vectorized numpy, 400k+ points),
independent of the package's adaptive quadrature; headline regression
constants were frozen from 2,000,001-point evaluations of the same
oracle.
"""

import math

import numpy as np
import pytest

from gmcapacity.gaussian import (
    CovarianceBlocks,
    mean_photon_number,
    thermal_entropy,
    validate_pure_input,
)
from gmcapacity.solver import (
    BelowThresholdError,
    MonoNoise,
    asymptotic_capacity,
    brute_force_mono_oracle,
    classical_limit_capacity,
    env_symplectic_spectrum,
    finite_n_rate,
    first_mode_variance,
    full_correlation_capacity,
    mean_environment_entropy,
    mono_capacity,
    mono_solve,
    mono_threshold,
    multimode_solve,
    multimode_threshold,
    squeezing_fraction,
    symmetric_noise_solution,
    symmetric_threshold,
)
from gmcapacity.spectra import MarkovNoise


def g_vec(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mask = x > 0
    xm = x[mask]
    out[mask] = (xm + 1) * np.log2(xm + 1) - xm * np.log2(xm)
    return out


def nu_env_vec(variance, phi, xs):
    return variance * (1 - phi**2) / np.sqrt((1 + phi**2) ** 2 - 4 * phi**2 * np.cos(xs) ** 2)


def trapezoid_mean(values, xs):
    return float(np.trapezoid(values, xs) / math.pi)


XS_DENSE = np.linspace(0.0, math.pi, 400001)
GRID = np.linspace(0.0, math.pi, 1001)


class TestMonoNoise:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            MonoNoise(0.0, 1.0)
        with pytest.raises(ValueError):
            MonoNoise(1.0, -0.5)


class TestMonoThreshold:
    def test_symmetric_noise_free(self):
        assert mono_threshold(MonoNoise(1.3, 1.3)) == 0.0

    def test_anisotropic(self):
        assert mono_threshold(MonoNoise(2.0, 0.5)) == pytest.approx(1.25, abs=1e-15)
        assert mono_threshold(MonoNoise(1.0, 4.0)) == pytest.approx(2.0, abs=1e-15)


class TestMonoSolve:
    def test_symmetric_coherent(self):
        sol = mono_solve(MonoNoise(1.0, 1.0), 2.0)
        assert sol.input_q == 0.5
        assert sol.input_p == 0.5
        assert sol.water_level == pytest.approx(3.5, abs=1e-15)
        assert sol.modulation_q == pytest.approx(2.0, abs=1e-15)
        assert sol.modulation_p == pytest.approx(2.0, abs=1e-15)
        assert sol.above_threshold

    def test_anisotropic(self):
        sol = mono_solve(MonoNoise(2.0, 0.5), 2.0)
        assert sol.input_q == pytest.approx(1.0, abs=1e-15)
        assert sol.input_p == pytest.approx(0.25, abs=1e-15)
        assert sol.water_level == pytest.approx(3.75, abs=1e-15)
        assert sol.modulation_q == pytest.approx(0.75, abs=1e-12)
        assert sol.modulation_p == pytest.approx(3.0, abs=1e-12)
        # Total variance budget: both quadratures together carry 2 nbar + 1.
        total = sol.input_q + sol.input_p + sol.modulation_q + sol.modulation_p
        assert total == pytest.approx(5.0, abs=1e-12)

    def test_pure_input(self):
        sol = mono_solve(MonoNoise(3.0, 0.7), 4.0)
        assert sol.input_q * sol.input_p == pytest.approx(0.25, abs=1e-12)

    def test_flat_output(self):
        noise = MonoNoise(2.0, 0.5)
        sol = mono_solve(noise, 2.0)
        assert sol.input_q + noise.var_q + sol.modulation_q == pytest.approx(
            sol.water_level, abs=1e-12
        )
        assert sol.input_p + noise.var_p + sol.modulation_p == pytest.approx(
            sol.water_level, abs=1e-12
        )

    def test_below_threshold(self):
        with pytest.raises(BelowThresholdError) as excinfo:
            mono_solve(MonoNoise(2.0, 0.5), 1.0)
        assert excinfo.value.threshold == pytest.approx(1.25, abs=1e-15)

    def test_energy_constraint_at_covariance_level(self):
        # The solved variances reproduce the photon budget through the
        # covariance-level accounting, and the input stays pure.
        sol = mono_solve(MonoNoise(2.0, 0.5), 2.0)
        gamma_in = CovarianceBlocks.diagonal([sol.input_q], [sol.input_p])
        gamma_mod = CovarianceBlocks.diagonal([sol.modulation_q], [sol.modulation_p])
        assert mean_photon_number(gamma_in, gamma_mod) == pytest.approx(2.0, abs=1e-12)
        assert validate_pure_input(gamma_in)

    def test_negative_energy_rejected(self):
        with pytest.raises(ValueError):
            mono_solve(MonoNoise(1.0, 1.0), -0.1)


class TestMonoCapacity:
    def test_thermal_reduction(self):
        assert mono_capacity(MonoNoise(1.0, 1.0), 2.0) == pytest.approx(
            thermal_entropy(3.0) - thermal_entropy(1.0), abs=1e-15
        )
        # 4 log2 4 - 3 log2 3 - 2 = 6 - 3 log2 3.
        assert mono_capacity(MonoNoise(1.0, 1.0), 2.0) == pytest.approx(
            6.0 - 3.0 * math.log2(3.0), abs=1e-12
        )

    def test_anisotropic_means(self):
        value = mono_capacity(MonoNoise(2.0, 0.5), 2.0)
        assert value == pytest.approx(
            thermal_entropy(3.25) - thermal_entropy(1.0), abs=1e-15
        )

    def test_zero_energy_zero_capacity(self):
        assert mono_capacity(MonoNoise(1.5, 1.5), 0.0) == 0.0

    def test_below_threshold(self):
        with pytest.raises(BelowThresholdError):
            mono_capacity(MonoNoise(2.0, 0.5), 1.0)


class TestMultimodeThreshold:
    def test_memoryless(self):
        assert multimode_threshold(MarkovNoise(1.0, 0.0)) == 0.0

    def test_reference_points(self):
        # Closed form lands within one ulp of the round values.
        assert abs(multimode_threshold(MarkovNoise(1.0, 0.7)) - 7.0) <= 1e-12
        assert abs(multimode_threshold(MarkovNoise(1.0, 0.9)) - 27.0) <= 1e-12
        assert multimode_threshold(MarkovNoise(1.0, 0.5)) == 3.0

    def test_correlation_cap(self):
        with pytest.raises(ValueError):
            multimode_threshold(MarkovNoise(1.0, 0.9995))
        with pytest.raises(ValueError):
            multimode_threshold(MarkovNoise(1.0, -0.1))


class TestSqueezingFraction:
    def test_white_noise_coherent(self):
        assert squeezing_fraction(MarkovNoise(1.0, 0.0), 3.0) == 0.0

    def test_variance_independent(self):
        lo = squeezing_fraction(MarkovNoise(1.0, 0.5), 1.0)
        hi = squeezing_fraction(MarkovNoise(7.0, 0.5), 1.0)
        assert lo == hi

    def test_against_trapezoid_oracle(self):
        phi = 0.5
        integrand = 0.5 * np.sqrt(
            (1 + phi**2 + 2 * phi * np.cos(XS_DENSE))
            / (1 + phi**2 - 2 * phi * np.cos(XS_DENSE))
        )
        expected = trapezoid_mean(integrand, XS_DENSE) - 0.5
        value = squeezing_fraction(MarkovNoise(1.0, phi), 1.0)
        assert value == pytest.approx(expected, abs=1e-9)
        # Frozen from the 2,000,001-point evaluation of the same oracle.
        assert value == pytest.approx(0.13512460006066118, abs=1e-9)

    def test_fixed_snr_ordering(self):
        # At matching signal-to-noise ratio the weaker correlation spends
        # a larger energy share on squeezing.
        nbar_07 = multimode_threshold(MarkovNoise(1.0, 0.7))
        nbar_09 = multimode_threshold(MarkovNoise(1.0, 0.9))
        assert squeezing_fraction(MarkovNoise(1.0, 0.7), nbar_07) > squeezing_fraction(
            MarkovNoise(1.0, 0.9), nbar_09
        )

    def test_rejects_nonpositive_energy(self):
        with pytest.raises(ValueError):
            squeezing_fraction(MarkovNoise(1.0, 0.5), 0.0)

    def test_domain_edge_correlation(self):
        # Strongest admissible correlation: the input spectrum peaks near
        # 1e3 in a layer of width ~1e-3, which the quadrature must resolve.
        noise = MarkovNoise(1.0, 0.999)
        threshold = multimode_threshold(noise)
        eta = squeezing_fraction(noise, threshold)
        phi = 0.999
        xs = np.linspace(0.0, math.pi, 4_000_001)
        integrand = 0.5 * np.sqrt(
            (1 + phi**2 + 2 * phi * np.cos(xs)) / (1 + phi**2 - 2 * phi * np.cos(xs))
        )
        expected = (trapezoid_mean(integrand, xs) - 0.5) / threshold
        assert eta == pytest.approx(expected, abs=1e-8)
        assert 0.0 < eta < 1.0


class TestMultimodeSolve:
    def test_memoryless_flat(self):
        sol = multimode_solve(MarkovNoise(1.0, 0.0), 2.0)
        assert sol.water_level == pytest.approx(3.5, abs=1e-15)
        assert sol.squeezing_fraction == 0.0
        for x in (0.0, 1.0, math.pi):
            assert sol.input_q(x) == pytest.approx(0.5, abs=1e-12)
            assert sol.modulation_q(x) == pytest.approx(2.0, abs=1e-12)

    def test_water_level_and_binding_point(self):
        sol = multimode_solve(MarkovNoise(1.0, 0.7), 7.5)
        assert sol.water_level == pytest.approx(9.0, abs=1e-12)
        mods = np.array([sol.modulation_q(float(x)) for x in GRID])
        assert mods.min() >= -1e-12
        # The q modulation is squeezed out where the q noise peaks: x = 0.
        assert np.argmin(mods) == 0
        assert mods[0] == pytest.approx(7.5 - 7.0, abs=1e-12)

    def test_purity_everywhere(self):
        sol = multimode_solve(MarkovNoise(1.0, 0.6), 6.0)
        for x in GRID[::50]:
            assert sol.input_q(float(x)) * sol.input_p(float(x)) == pytest.approx(
                0.25, abs=1e-12
            )

    def test_flat_total_output(self):
        sol = multimode_solve(MarkovNoise(1.0, 0.5), 4.0)
        for x in GRID[::10]:
            x = float(x)
            total_q = sol.input_q(x) + sol.noise_q(x) + sol.modulation_q(x)
            total_p = sol.input_p(x) + sol.noise_p(x) + sol.modulation_p(x)
            assert total_q == pytest.approx(sol.water_level, abs=1e-10)
            assert total_p == pytest.approx(sol.water_level, abs=1e-10)

    def test_modulation_energy_share(self):
        noise = MarkovNoise(1.0, 0.7)
        n_bar = 7.5
        sol = multimode_solve(noise, n_bar)
        mods = np.array([sol.modulation_q(float(x)) for x in XS_DENSE])
        assert trapezoid_mean(mods, XS_DENSE) == pytest.approx(
            (1.0 - sol.squeezing_fraction) * n_bar, abs=1e-8
        )

    def test_binding_exactly_at_threshold(self):
        sol = multimode_solve(MarkovNoise(1.0, 0.5), 3.0)
        assert sol.modulation_q(0.0) == pytest.approx(0.0, abs=1e-12)
        assert sol.modulation_p(math.pi) == pytest.approx(0.0, abs=1e-12)

    def test_below_threshold_carries_value(self):
        with pytest.raises(BelowThresholdError) as excinfo:
            multimode_solve(MarkovNoise(1.0, 0.7), 6.9)
        assert excinfo.value.threshold == pytest.approx(7.0, abs=1e-12)


class TestAsymptoticCapacity:
    def test_memoryless_reduction(self):
        value = asymptotic_capacity(MarkovNoise(1.0, 0.0), 7.5)
        assert value == pytest.approx(
            thermal_entropy(8.5) - thermal_entropy(1.0), abs=1e-12
        )

    def test_regression_constant(self):
        # Frozen from a 2,000,001-point trapezoidal evaluation of the
        # spectral integral.
        value = asymptotic_capacity(MarkovNoise(1.0, 0.7), 7.5)
        assert value == pytest.approx(3.1989254398785825, abs=1e-9)

    def test_against_trapezoid_oracle(self):
        variance, phi, n_bar = 1.0, 0.5, 4.0
        mean_entropy = trapezoid_mean(g_vec(nu_env_vec(variance, phi, XS_DENSE)), XS_DENSE)
        expected = float(g_vec(n_bar + variance)) - mean_entropy
        value = asymptotic_capacity(MarkovNoise(variance, phi), n_bar)
        assert value == pytest.approx(expected, abs=1e-9)

    def test_bounds(self):
        value = asymptotic_capacity(MarkovNoise(1.0, 0.7), 7.5)
        assert thermal_entropy(8.5) - thermal_entropy(1.0) < value < thermal_entropy(8.5)

    def test_environment_entropy_vanishes_at_full_correlation(self):
        terms = [mean_environment_entropy(MarkovNoise(1.0, phi)) for phi in (0.9, 0.99, 0.999)]
        assert terms[0] > terms[1] > terms[2] > 0.0

    def test_full_correlation_limit_value(self):
        # The analytic limit is the thermal entropy of the total energy;
        # the strongest admissible correlation sits within its entropy
        # term of that value.
        noise = MarkovNoise(1.0, 0.999)
        n_bar = multimode_threshold(noise) + 1.0
        limit = full_correlation_capacity(noise, n_bar)
        assert limit == thermal_entropy(n_bar + 1.0)
        value = asymptotic_capacity(noise, n_bar)
        assert limit - mean_environment_entropy(noise) == pytest.approx(value, abs=1e-12)
        assert limit - value <= 0.05

    def test_below_threshold(self):
        with pytest.raises(BelowThresholdError):
            asymptotic_capacity(MarkovNoise(1.0, 0.9), 7.5)


class TestFiniteNRate:
    def test_single_use(self):
        value = finite_n_rate(MarkovNoise(1.0, 0.7), 7.5, 1)
        assert value == pytest.approx(
            thermal_entropy(8.5) - thermal_entropy(1.0), abs=1e-12
        )

    def test_white_noise_flat_in_n(self):
        expected = thermal_entropy(8.5) - thermal_entropy(1.0)
        for n in (1, 7, 32):
            assert finite_n_rate(MarkovNoise(1.0, 0.0), 7.5, n) == pytest.approx(
                expected, abs=1e-12
            )

    def test_converges_toward_asymptotic(self):
        noise = MarkovNoise(1.0, 0.7)
        capacity = asymptotic_capacity(noise, 7.5)
        dev_16 = abs(finite_n_rate(noise, 7.5, 16) - capacity)
        dev_64 = abs(finite_n_rate(noise, 7.5, 64) - capacity)
        assert dev_64 < dev_16

    def test_pairing_flag_matters(self):
        noise = MarkovNoise(1.0, 0.7)
        cross = finite_n_rate(noise, 7.5, 50)
        same = finite_n_rate(noise, 7.5, 50, same_order_pairing=True)
        assert abs(cross - same) > 1e-2

    def test_validation(self):
        with pytest.raises(ValueError):
            finite_n_rate(MarkovNoise(1.0, 0.5), 7.5, 0)


class TestClassicalLimit:
    def test_white_noise_unit_snr(self):
        assert classical_limit_capacity(MarkovNoise(1.0, 0.0), 1.0) == pytest.approx(
            1.0, abs=1e-15
        )

    def test_correlated(self):
        assert classical_limit_capacity(MarkovNoise(1.0, 0.5), 3.0) == pytest.approx(
            math.log2(16.0 / 3.0), abs=1e-12
        )

    def test_quantum_capacity_below_classical(self):
        phi = 0.7
        snr = multimode_threshold(MarkovNoise(1.0, phi))
        noise = MarkovNoise(1.0, phi)
        assert asymptotic_capacity(noise, snr) < classical_limit_capacity(noise, snr)

    def test_rejects_nonpositive_snr(self):
        with pytest.raises(ValueError):
            classical_limit_capacity(MarkovNoise(1.0, 0.5), 0.0)


class TestSymmetricNoise:
    def test_memoryless_matches_general_solver(self):
        general = multimode_solve(MarkovNoise(1.0, 0.0), 2.0)
        symmetric = symmetric_noise_solution(MarkovNoise(1.0, 0.0), 2.0)
        assert symmetric.capacity_bits == pytest.approx(general.capacity_bits, abs=1e-12)
        assert symmetric.water_level == general.water_level
        for x in (0.0, 1.5, math.pi):
            assert symmetric.input_q(x) == general.input_q(x) == 0.5

    @pytest.mark.parametrize("phi", [0.3, 0.7])
    def test_coherent_input_everywhere(self, phi):
        sol = symmetric_noise_solution(MarkovNoise(1.0, phi), 6.0)
        assert sol.squeezing_fraction == 0.0
        for x in GRID[::100]:
            assert sol.input_q(float(x)) == 0.5
            assert sol.input_p(float(x)) == 0.5

    def test_capacity_formula(self):
        variance, phi, n_bar = 1.0, 0.7, 6.0
        spectrum = variance * (1 - phi**2) / (1 + phi**2 - 2 * phi * np.cos(XS_DENSE))
        expected = float(g_vec(n_bar + variance)) - trapezoid_mean(g_vec(spectrum), XS_DENSE)
        sol = symmetric_noise_solution(MarkovNoise(variance, phi), n_bar)
        assert sol.capacity_bits == pytest.approx(expected, abs=1e-9)

    def test_threshold(self):
        assert symmetric_threshold(MarkovNoise(1.0, 0.7)) == pytest.approx(
            2 * 0.7 / 0.3, abs=1e-12
        )
        with pytest.raises(BelowThresholdError):
            symmetric_noise_solution(MarkovNoise(1.0, 0.7), 4.0)

    def test_water_fills_over_noise(self):
        sol = symmetric_noise_solution(MarkovNoise(1.0, 0.3), 2.0)
        for x in GRID[::100]:
            x = float(x)
            total = sol.input_q(x) + sol.noise_q(x) + sol.modulation_q(x)
            assert total == pytest.approx(sol.water_level, abs=1e-10)


class TestFirstModeVariance:
    def test_white_noise_vacuum(self):
        assert first_mode_variance(0.0) == pytest.approx(0.5, abs=1e-10)

    def test_against_trapezoid_oracle(self):
        phi = 0.5
        integrand = np.sqrt(
            (1 + phi + 2 * phi * np.cos(XS_DENSE)) / (1 + phi - 2 * phi * np.cos(XS_DENSE))
        )
        expected = 0.5 * trapezoid_mean(integrand, XS_DENSE)
        value = first_mode_variance(phi)
        assert value == pytest.approx(expected, abs=1e-9)
        # Frozen from the 2,000,001-point evaluation of the same oracle.
        assert value == pytest.approx(0.5760350545188413, abs=1e-9)

    def test_thermal_excess_and_monotone(self):
        values = [first_mode_variance(0.05 * k) for k in range(20)]
        assert all(v > 0.5 for v in values[1:])
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_alt_form(self):
        # The alternate integrand equals the mean input spectrum, so its
        # value is the squeezing fraction (at unit energy) plus 1/2.
        phi = 0.5
        alt = first_mode_variance(phi, alt_form=True)
        assert alt == pytest.approx(
            squeezing_fraction(MarkovNoise(1.0, phi), 1.0) + 0.5, abs=1e-9
        )
        for p in (0.3, 0.9):
            assert first_mode_variance(p, alt_form=True) > first_mode_variance(p)

    def test_domain(self):
        with pytest.raises(ValueError):
            first_mode_variance(1.0)
        with pytest.raises(ValueError):
            first_mode_variance(-0.2)


class TestBruteForceOracle:
    def test_matches_closed_form_symmetric(self):
        noise = MonoNoise(1.0, 1.0)
        closed = mono_solve(noise, 2.0)
        found = brute_force_mono_oracle(noise, 2.0)
        assert abs(found.capacity_bits - closed.capacity_bits) <= 1e-4
        assert abs(found.input_q - closed.input_q) <= 5e-3

    def test_matches_closed_form_anisotropic(self):
        noise = MonoNoise(2.0, 0.5)
        closed = mono_solve(noise, 2.0)
        found = brute_force_mono_oracle(noise, 2.0)
        assert abs(found.capacity_bits - closed.capacity_bits) <= 1e-4
        assert abs(found.input_q - closed.input_q) <= 5e-3
        assert abs(found.modulation_q - closed.modulation_q) <= 5e-3
        assert abs(found.modulation_p - closed.modulation_p) <= 5e-3

    def test_below_threshold_boundary_solution(self):
        found = brute_force_mono_oracle(MonoNoise(2.0, 0.5), 1.0)
        assert not found.above_threshold
        assert min(found.modulation_q, found.modulation_p) == 0.0
        assert found.capacity_bits > 0.0

    def test_zero_energy(self):
        found = brute_force_mono_oracle(MonoNoise(1.0, 1.0), 0.0)
        assert found.input_q == pytest.approx(0.5, abs=1e-12)
        assert found.capacity_bits == 0.0

    def test_deterministic(self):
        noise = MonoNoise(1.5, 0.8)
        assert brute_force_mono_oracle(noise, 2.5) == brute_force_mono_oracle(noise, 2.5)

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            brute_force_mono_oracle(MonoNoise(1.0, 1.0), 1.0, resolution=32)
