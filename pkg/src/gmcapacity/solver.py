"""Water-filling solvers and channel capacities.

Covers the single-mode phase-sensitive additive channel (closed form),
the infinite-use limit of the AR(1)-correlated channel (global water
filling over the noise spectrum), finite-use transmission rates, the
classical / full-correlation / symmetric-noise limits, and a brute-force
grid oracle that validates the closed-form solution independently.

Above the input-energy threshold the optimal strategy splits the photon
budget between squeezing the input to match the noise anisotropy and
classical Gaussian modulation, such that the overall output is a flat
thermal state at the water level mu.  Below threshold the closed forms
do not apply and the solvers raise :class:`BelowThresholdError`; only
the oracle explores that regime numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gaussian import VACUUM_VARIANCE, thermal_entropy
from .numerics import EigenConfig, QuadratureConfig, grid_maximize, integrate
from .spectra import MarkovNoise, SpectralFunction, finite_spectrum, markov_matrix, markov_symbol

# Cap for the closed-form solvers: thresholds and water levels diverge as
# the correlation approaches 1, so stronger correlations are rejected and
# the limit is only reported analytically.
MAX_CORRELATION = 0.999

__all__ = [
    "MAX_CORRELATION",
    "MonoNoise",
    "MonoSolution",
    "MultimodeSolution",
    "BelowThresholdError",
    "mono_threshold",
    "mono_solve",
    "mono_capacity",
    "multimode_threshold",
    "env_spectrum_q",
    "env_spectrum_p",
    "env_symplectic_spectrum",
    "input_spectrum_q",
    "input_spectrum_p",
    "squeezing_fraction",
    "mean_environment_entropy",
    "multimode_solve",
    "asymptotic_capacity",
    "finite_n_rate",
    "classical_limit_capacity",
    "full_correlation_capacity",
    "symmetric_threshold",
    "symmetric_noise_solution",
    "first_mode_variance",
    "brute_force_mono_oracle",
]


class BelowThresholdError(ValueError):
    """Input energy is too small for the full water-filling solution."""

    def __init__(self, message: str, threshold: float):
        super().__init__(message)
        self.threshold = threshold


@dataclass(frozen=True)
class MonoNoise:
    """Per-quadrature noise variances of a single-mode additive channel."""

    var_q: float
    var_p: float

    def __post_init__(self) -> None:
        if not (self.var_q > 0 and self.var_p > 0):
            raise ValueError(
                f"noise variances must be positive, got ({self.var_q}, {self.var_p})"
            )


@dataclass(frozen=True)
class MonoSolution:
    """Optimal single-mode input/modulation split and the resulting capacity.

    ``input_q * input_p = 1/4`` (pure input) and, above threshold, both
    quadrature columns fill up to the common water level:
    ``input + noise + modulation = water_level``.
    """

    input_q: float
    input_p: float
    modulation_q: float
    modulation_p: float
    water_level: float
    capacity_bits: float
    above_threshold: bool


@dataclass(frozen=True)
class MultimodeSolution:
    """Water-filling solution over the whole noise spectrum.

    The spectra are callables on the spectral parameter x in [0, pi].
    Above threshold the water level equals n_bar + variance + 1/2 and the
    modulation spectra stay non-negative on the whole interval.
    """

    squeezing_fraction: float
    water_level: float
    capacity_bits: float
    threshold: float
    input_q: SpectralFunction
    input_p: SpectralFunction
    modulation_q: SpectralFunction
    modulation_p: SpectralFunction
    noise_q: SpectralFunction
    noise_p: SpectralFunction


def _require_solver_noise(noise: MarkovNoise) -> None:
    if not 0.0 <= noise.correlation <= MAX_CORRELATION:
        raise ValueError(
            "closed-form solvers accept correlations in [0, "
            f"{MAX_CORRELATION}], got {noise.correlation}"
        )


def _ensure_above(n_bar: float, threshold: float) -> None:
    # Relative slack absorbs round-off when n_bar sits exactly at the
    # threshold (the closed form may land a few ulps on either side).
    slack = 1e-12 * max(1.0, abs(threshold))
    if n_bar < threshold - slack:
        raise BelowThresholdError(
            f"input energy {n_bar:g} is below the water-filling threshold "
            f"{threshold:.12g}",
            threshold=threshold,
        )


# ---------------------------------------------------------------------------
# Single-mode phase-sensitive channel
# ---------------------------------------------------------------------------


def mono_threshold(noise: MonoNoise) -> float:
    """Minimum mean photon number for the full single-mode water-filling solution.

    (sqrt(max/min) + |var_q - var_p| - 1) / 2; zero for symmetric noise,
    where a coherent input needs no squeezing energy.
    """
    hi = max(noise.var_q, noise.var_p)
    lo = min(noise.var_q, noise.var_p)
    return 0.5 * (math.sqrt(hi / lo) + abs(noise.var_q - noise.var_p) - 1.0)


def mono_solve(noise: MonoNoise, n_bar: float) -> MonoSolution:
    """Optimal input squeezing and modulation for a single-mode channel.

    The pure input matches the noise anisotropy,
    input_q = sqrt(var_q / var_p) / 2, the water level
    mu = n_bar + (var_q + var_p)/2 + 1/2 reflects the total energy, and
    the modulation fills each quadrature up to mu.  Raises
    :class:`BelowThresholdError` when a modulation variance would turn
    negative.
    """
    if n_bar < 0:
        raise ValueError(f"n_bar must be non-negative, got {n_bar}")
    threshold = mono_threshold(noise)
    _ensure_above(n_bar, threshold)
    input_q = 0.5 * math.sqrt(noise.var_q / noise.var_p)
    input_p = 0.5 * math.sqrt(noise.var_p / noise.var_q)
    level = n_bar + 0.5 * (noise.var_q + noise.var_p) + VACUUM_VARIANCE
    modulation_q = max(level - input_q - noise.var_q, 0.0)
    modulation_p = max(level - input_p - noise.var_p, 0.0)
    return MonoSolution(
        input_q=input_q,
        input_p=input_p,
        modulation_q=modulation_q,
        modulation_p=modulation_p,
        water_level=level,
        capacity_bits=mono_capacity(noise, n_bar),
        above_threshold=True,
    )


def mono_capacity(noise: MonoNoise, n_bar: float) -> float:
    """One-shot capacity of the single-mode channel, in bits.

    g(n_bar + arithmetic mean of the noise) - g(geometric mean of the
    noise); for symmetric noise this is the thermal-channel value
    g(n_bar + N) - g(N).
    """
    if n_bar < 0:
        raise ValueError(f"n_bar must be non-negative, got {n_bar}")
    _ensure_above(n_bar, mono_threshold(noise))
    mean_noise = 0.5 * (noise.var_q + noise.var_p)
    return thermal_entropy(n_bar + mean_noise) - thermal_entropy(
        math.sqrt(noise.var_q * noise.var_p)
    )


# ---------------------------------------------------------------------------
# Correlated multimode channel, infinite-use limit
# ---------------------------------------------------------------------------


def env_spectrum_q(noise: MarkovNoise) -> SpectralFunction:
    """Noise spectrum seen by the q quadratures (positively correlated branch)."""
    return markov_symbol(noise, sign=1)


def env_spectrum_p(noise: MarkovNoise) -> SpectralFunction:
    """Noise spectrum seen by the p quadratures: the q spectrum mirrored at pi/2."""
    return markov_symbol(noise, sign=-1)


def env_symplectic_spectrum(noise: MarkovNoise) -> SpectralFunction:
    """Geometric mean of the two quadrature noise spectra.

    variance (1 - c^2) / sqrt((1 + c^2)^2 - 4 c^2 cos^2 x); equals the
    plain variance at both endpoints, so the integrands built on it stay
    smooth for |correlation| < 1.
    """
    c = noise.correlation
    scale = noise.variance * (1.0 - c * c)
    square = (1.0 + c * c) ** 2

    def evaluate(x: float) -> float:
        cos_x = math.cos(x)
        return scale / math.sqrt(square - 4.0 * c * c * cos_x * cos_x)

    return SpectralFunction(evaluate)


def _input_q_value(c: float, x: float) -> float:
    cos_x = math.cos(x)
    one_plus = 1.0 + c * c
    return 0.5 * math.sqrt((one_plus + 2.0 * c * cos_x) / (one_plus - 2.0 * c * cos_x))


def input_spectrum_q(noise: MarkovNoise) -> SpectralFunction:
    """Optimal pure-input spectrum for q: half the square root of the noise ratio.

    The variance cancels from the ratio, so the input depends on the
    correlation only.
    """
    c = noise.correlation

    def evaluate(x: float) -> float:
        return _input_q_value(c, x)

    return SpectralFunction(evaluate)


def input_spectrum_p(noise: MarkovNoise) -> SpectralFunction:
    """Optimal pure-input spectrum for p (reciprocal of the q branch over 4)."""
    c = noise.correlation

    def evaluate(x: float) -> float:
        return 0.5 / (2.0 * _input_q_value(c, x))

    return SpectralFunction(evaluate)


def multimode_threshold(noise: MarkovNoise) -> float:
    """Minimum input energy that lets the modulation cover the whole spectrum.

    ((1 + c)/(1 - c) - 1) (variance + 1/2); grows without bound as the
    correlation approaches 1 and vanishes for white noise.
    """
    _require_solver_noise(noise)
    c = noise.correlation
    return ((1.0 + c) / (1.0 - c) - 1.0) * (noise.variance + VACUUM_VARIANCE)


def squeezing_fraction(
    noise: MarkovNoise, n_bar: float, config: QuadratureConfig | None = None
) -> float:
    """Fraction of the photon budget spent on squeezing the input.

    (mean input variance - 1/2) / n_bar with the mean taken over the
    spectral interval; zero for white noise, independent of the noise
    variance by construction.  Lies in [0, 1] whenever n_bar is at or
    above :func:`multimode_threshold`; larger values signal that the
    energy cannot cover the squeezing demanded by the noise anisotropy.
    """
    _require_solver_noise(noise)
    if not n_bar > 0:
        raise ValueError(f"n_bar must be positive, got {n_bar}")
    c = noise.correlation
    if c == 0.0:
        return 0.0
    total = integrate(lambda x: _input_q_value(c, x), 0.0, math.pi, config)
    return (total - 0.5 * math.pi) / (math.pi * n_bar)


def mean_environment_entropy(
    noise: MarkovNoise, config: QuadratureConfig | None = None
) -> float:
    """Spectral average of g over the symplectic noise spectrum, in bits.

    This is the subtracted term of the asymptotic capacity; it tends to
    g(variance) for white noise and to zero when the correlation
    approaches 1.
    """
    _require_solver_noise(noise)
    nu_env = env_symplectic_spectrum(noise)
    total = integrate(lambda x: thermal_entropy(nu_env(x)), 0.0, math.pi, config)
    return total / math.pi


def asymptotic_capacity(
    noise: MarkovNoise, n_bar: float, config: QuadratureConfig | None = None
) -> float:
    """Capacity in the infinite-use limit, in bits per channel use.

    g(n_bar + variance) minus the spectral mean of g over the symplectic
    noise spectrum.  Only valid above :func:`multimode_threshold`.
    """
    _require_solver_noise(noise)
    _ensure_above(n_bar, multimode_threshold(noise))
    return thermal_entropy(n_bar + noise.variance) - mean_environment_entropy(
        noise, config
    )


def multimode_solve(
    noise: MarkovNoise, n_bar: float, config: QuadratureConfig | None = None
) -> MultimodeSolution:
    """Global water-filling solution over the AR(1) noise spectrum.

    The input spectra match the noise anisotropy pointwise, the water
    level is n_bar + variance + 1/2, and the modulation fills every
    spectral channel up to that level, making the overall output flat.
    Raises :class:`BelowThresholdError` (carrying the threshold) when the
    modulation would turn negative somewhere on the spectrum.
    """
    _require_solver_noise(noise)
    threshold = multimode_threshold(noise)
    _ensure_above(n_bar, threshold)
    level = n_bar + noise.variance + VACUUM_VARIANCE
    in_q = input_spectrum_q(noise)
    in_p = input_spectrum_p(noise)
    noise_q = env_spectrum_q(noise)
    noise_p = env_spectrum_p(noise)

    def mod_q(x: float) -> float:
        return level - in_q(x) - noise_q(x)

    def mod_p(x: float) -> float:
        return level - in_p(x) - noise_p(x)

    return MultimodeSolution(
        squeezing_fraction=squeezing_fraction(noise, n_bar, config),
        water_level=level,
        capacity_bits=asymptotic_capacity(noise, n_bar, config),
        threshold=threshold,
        input_q=in_q,
        input_p=in_p,
        modulation_q=SpectralFunction(mod_q),
        modulation_p=SpectralFunction(mod_p),
        noise_q=noise_q,
        noise_p=noise_p,
    )


def finite_n_rate(
    noise: MarkovNoise,
    n_bar: float,
    n: int,
    same_order_pairing: bool = False,
    eigen_config: EigenConfig | None = None,
) -> float:
    """Optimal transmission rate for n channel uses, in bits per use.

    g(n_bar + variance) - mean over modes of g(sqrt(lq_k * lp_k)), with
    lq, lp the numerically obtained eigenvalues of the two finite noise
    blocks.  By default the descending q eigenvalues pair with ascending
    p eigenvalues, mirroring the x <-> pi - x relation of the limiting
    spectra; ``same_order_pairing=True`` pairs both descending instead,
    for sensitivity checks.  Converges to :func:`asymptotic_capacity`
    as n grows.
    """
    _require_solver_noise(noise)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n_bar < 0:
        raise ValueError(f"n_bar must be non-negative, got {n_bar}")
    lam_q = finite_spectrum(markov_matrix(noise, 1, n), eigen_config)
    lam_p = finite_spectrum(markov_matrix(noise, -1, n), eigen_config)
    if not same_order_pairing:
        lam_p = lam_p[::-1]
    mean_term = (
        sum(thermal_entropy(math.sqrt(lq * lp)) for lq, lp in zip(lam_q, lam_p)) / n
    )
    return thermal_entropy(n_bar + noise.variance) - mean_term


def classical_limit_capacity(noise: MarkovNoise, snr: float) -> float:
    """Capacity of the classical Gaussian channel with the same correlated noise.

    log2((1 + snr) / (1 - c^2)) at fixed signal-to-noise ratio
    snr = n_bar / variance; the quantum capacity approaches this value
    from below as energy and noise grow together.
    """
    _require_solver_noise(noise)
    if not snr > 0:
        raise ValueError(f"snr must be positive, got {snr}")
    c = noise.correlation
    return math.log2((1.0 + snr) / (1.0 - c * c))


def full_correlation_capacity(noise: MarkovNoise, n_bar: float) -> float:
    """Analytic capacity limit as the correlation approaches 1.

    The environment entropy term vanishes in that limit, leaving
    g(n_bar + variance).  Exposed analytically because the closed-form
    solvers cap the correlation at ``MAX_CORRELATION``: the threshold
    diverges, so the limit is only reached with ever-growing energy.
    """
    if n_bar < 0:
        raise ValueError(f"n_bar must be non-negative, got {n_bar}")
    return thermal_entropy(n_bar + noise.variance)


def symmetric_threshold(noise: MarkovNoise) -> float:
    """Water-filling threshold when both quadratures carry the same correlation sign."""
    _require_solver_noise(noise)
    c = noise.correlation
    return ((1.0 + c) / (1.0 - c) - 1.0) * noise.variance


def symmetric_noise_solution(
    noise: MarkovNoise, n_bar: float, config: QuadratureConfig | None = None
) -> MultimodeSolution:
    """Water-filling solution for symmetrically correlated noise.

    With identical spectra in both quadratures the optimal input is
    coherent (1/2 everywhere, no squeezing energy) and the classical
    modulation water-fills over noise + 1/2 in both quadratures with the
    common level n_bar + variance + 1/2.
    """
    _require_solver_noise(noise)
    threshold = symmetric_threshold(noise)
    _ensure_above(n_bar, threshold)
    level = n_bar + noise.variance + VACUUM_VARIANCE
    spectrum = markov_symbol(noise, sign=1)

    def coherent(x: float) -> float:
        return VACUUM_VARIANCE

    def modulation(x: float) -> float:
        return level - VACUUM_VARIANCE - spectrum(x)

    capacity = thermal_entropy(n_bar + noise.variance) - (
        integrate(lambda x: thermal_entropy(spectrum(x)), 0.0, math.pi, config)
        / math.pi
    )
    flat_input = SpectralFunction(coherent)
    water = SpectralFunction(modulation)
    return MultimodeSolution(
        squeezing_fraction=0.0,
        water_level=level,
        capacity_bits=capacity,
        threshold=threshold,
        input_q=flat_input,
        input_p=flat_input,
        modulation_q=water,
        modulation_p=water,
        noise_q=spectrum,
        noise_p=spectrum,
    )


def first_mode_variance(
    correlation: float,
    alt_form: bool = False,
    config: QuadratureConfig | None = None,
) -> float:
    """Variance of the first mode of the optimal input, rotated back to the mode basis.

    (1/2 pi) integral of sqrt((1 + c + 2 c cos x) / (1 + c - 2 c cos x))
    over [0, pi]; equal in q and p by construction, 1/2 (coherent) for
    white noise and strictly larger otherwise, which exposes the
    entanglement of the first mode with the rest.  ``alt_form=True``
    replaces 1 + c by 1 + c^2 in both places, which makes the integrand
    the mean input spectrum; the two variants are reported side by side
    by the CLI since they differ materially at strong correlation.
    """
    if not 0.0 <= correlation < 1.0:
        raise ValueError(f"correlation must lie in [0, 1), got {correlation}")
    c = correlation
    base = 1.0 + (c * c if alt_form else c)

    def integrand(x: float) -> float:
        shift = 2.0 * c * math.cos(x)
        return math.sqrt((base + shift) / (base - shift))

    return integrate(integrand, 0.0, math.pi, config) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_mono_oracle(
    noise: MonoNoise,
    n_bar: float,
    resolution: int = 161,
    refinements: int = 2,
) -> MonoSolution:
    """Maximize the single-mode information quantity by deterministic grid search.

    Searches over the input squeezing (with purity input_q * input_p =
    1/4 imposed) and the split of the remaining energy between the two
    modulation variances, holding the total energy constraint with
    equality.  Independent of the closed form in :func:`mono_solve`; it
    also explores the below-threshold regime, where it returns a
    boundary solution with one modulation variance pinned at zero.
    """
    if n_bar < 0:
        raise ValueError(f"n_bar must be non-negative, got {n_bar}")
    if resolution < 64:
        raise ValueError(f"resolution must be at least 64, got {resolution}")
    var_q = noise.var_q
    var_p = noise.var_p
    # Total variance budget: input_q + input_p + mod_q + mod_p = 2 n_bar + 1.
    budget = 2.0 * n_bar + 1.0
    spread = math.sqrt(budget * budget - 1.0)
    in_q_lo = 0.5 * (budget - spread)
    in_q_hi = 0.5 * (budget + spread)

    def objective(in_q: float, split: float) -> float:
        in_p = 0.25 / in_q
        mod_total = max(budget - in_q - in_p, 0.0)
        mod_q = split * mod_total
        mod_p = (1.0 - split) * mod_total
        nu_out = math.sqrt((in_q + var_q) * (in_p + var_p))
        nu_bar = math.sqrt((in_q + var_q + mod_q) * (in_p + var_p + mod_p))
        return thermal_entropy(nu_bar - 0.5) - thermal_entropy(nu_out - 0.5)

    (best_in_q, best_split), best_value = grid_maximize(
        objective,
        [(in_q_lo, in_q_hi), (0.0, 1.0)],
        resolution=resolution,
        refinements=refinements,
    )
    in_p = 0.25 / best_in_q
    mod_total = max(budget - best_in_q - in_p, 0.0)
    mod_q = best_split * mod_total
    mod_p = (1.0 - best_split) * mod_total
    level_q = best_in_q + var_q + mod_q
    level_p = in_p + var_p + mod_p
    threshold = mono_threshold(noise)
    return MonoSolution(
        input_q=best_in_q,
        input_p=in_p,
        modulation_q=mod_q,
        modulation_p=mod_p,
        # Below threshold the two columns differ; the water surface sits
        # on the taller one.
        water_level=max(level_q, level_p),
        capacity_bits=best_value,
        above_threshold=n_bar >= threshold - 1e-12 * max(1.0, threshold),
    )
