import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wavelets.cascade import (
    cascade_increments,
    cascade_provenance,
    cascade_scaling,
    cascade_values,
    fit_decay,
    mask_hash,
    wavelet_from_masks,
    wavelet_origin_check,
)
from wavelets.errors import DegenerateTail, InvalidGrid, InvalidWindow, NotNormalized, StepNotAligned
from wavelets.filterbank import SampledPeriodic, TrigPoly, check_pr, refinement_residual
from wavelets.freqfield import SampledFunction, indicator
from wavelets.spectrum import Spectrum

HAAR_STEP = 1 / 256


@pytest.fixture
def haar_phi(haar):
    return cascade_scaling(haar.synthesis[0], haar.spectrum, J=30, omega=8.0, step=HAAR_STEP)


def test_haar_scaling_function_values(haar_phi):
    assert haar_phi.value_at(0.0) == pytest.approx(1.0, abs=1e-12)
    assert abs(haar_phi.value_at(0.5)) == pytest.approx(2 / math.pi, abs=1e-6)
    assert abs(haar_phi.value_at(1.0)) < 1e-6


def test_haar_scaling_function_is_a_sinc(haar_phi):
    xi = haar_phi.grid
    assert_allclose(np.abs(haar_phi.samples), np.abs(np.sinc(xi)), atol=1e-6)


def test_haar_scaling_function_matches_closed_form(haar_phi):
    xi = haar_phi.grid
    closed_form = np.exp(-1j * np.pi * xi) * np.sinc(xi)
    assert np.max(np.abs(haar_phi.samples - closed_form)) <= 1e-6


@pytest.mark.parametrize("base", [0.0, 0.125, 0.25])
def test_haar_periodization_is_one(haar, base):
    # Lambda is the integers for N = 1; the dropped tail is below 2 sin(pi base)^2 / (pi^2 M).
    M = 200_000
    xi = base + np.arange(-M, M + 1, dtype=float)
    values = cascade_values(haar.synthesis[0], haar.spectrum, 30, xi)
    assert abs(np.sum(np.abs(values) ** 2) - 1.0) <= 1e-6


def test_haar_refinement_and_reconstruction(haar, haar_phi):
    assert check_pr(haar).max_deviation <= 1e-12
    assert refinement_residual(haar_phi, haar.synthesis[0], haar.spectrum) <= 1e-6


def test_unnormalized_lowpass_is_rejected(spectrum_n1):
    m0 = TrigPoly(spectrum=spectrum_n1, coeffs={(0, 0): 1.0, (1, 0): 1.0})
    with pytest.raises(NotNormalized):
        cascade_scaling(m0, spectrum_n1, J=5, omega=8.0, step=HAAR_STEP)


def test_cascade_depth_must_be_positive(haar):
    with pytest.raises(InvalidWindow):
        cascade_values(haar.synthesis[0], haar.spectrum, 0, np.zeros(3))


def test_point_sampled_mask_needs_a_closed_grid(spectrum_n1):
    m0 = SampledPeriodic(period=2.0, step=0.5, samples=[1, 1, 1, 1])
    with pytest.raises(StepNotAligned):
        cascade_scaling(m0, spectrum_n1, J=3, omega=8.0, step=1 / 8)


def test_shannon_cascade_reproduces_gamma_indicator(shannon_n2, spectrum_n2):
    bank, phi, _ = shannon_n2
    cascaded = cascade_scaling(bank.synthesis[0], spectrum_n2, J=30)
    assert np.max(np.abs(cascaded.samples - phi.samples)) < 1e-12


def test_wavelet_lives_on_the_dilated_grid(haar, haar_phi):
    psi = wavelet_from_masks(haar.synthesis[1], haar_phi, haar.spectrum)
    assert psi.omega == 16.0
    assert psi.step == 2 * HAAR_STEP
    assert psi.count == haar_phi.count
    assert abs(psi.value_at(0.0)) < 1e-15


def test_lowpass_channel_reproduces_refinement(haar, haar_phi):
    refined = wavelet_from_masks(haar.synthesis[0], haar_phi, haar.spectrum)
    direct = cascade_scaling(haar.synthesis[0], haar.spectrum, J=31, omega=16.0, step=2 * HAAR_STEP)
    assert_allclose(refined.samples, direct.samples, atol=1e-12)


def test_shannon_wavelets_are_disjoint_indicators(shannon_n2, spectrum_n2):
    bank, phi, _ = shannon_n2
    wavelets = [wavelet_from_masks(m, phi, spectrum_n2) for m in bank.synthesis[1:]]
    for i, a in enumerate(wavelets):
        assert set(np.unique(np.abs(a.samples)).round(12)) <= {0.0, 1.0}
        for b in wavelets[i + 1:]:
            assert np.max(np.abs(a.samples * b.samples)) == 0.0


def test_decay_fit_of_inverse_power():
    f = SampledFunction.from_callable(lambda xi: 1.0 / (1.0 + np.abs(xi)), 8.0, 1 / 64)
    fit = fit_decay(f)
    assert fit.epsilon == pytest.approx(0.5, abs=1e-6)
    assert fit.passed
    assert np.all(np.abs(f.samples) <= fit.C * (1 + np.abs(f.grid)) ** (-0.5 - fit.epsilon) + 1e-12)


def test_decay_fit_of_constant_fails():
    fit = fit_decay(SampledFunction.from_callable(lambda xi: np.ones_like(xi), 8.0, 1 / 64))
    assert not fit.passed
    assert fit.epsilon == pytest.approx(-0.5, abs=1e-9)


def test_decay_fit_of_compact_support_is_capped():
    fit = fit_decay(indicator([(0, 2)], 8.0, 1 / 64), cap=10.0)
    assert fit.compact
    assert fit.epsilon == 10.0
    assert fit.passed


def test_decay_fit_needs_a_wide_grid():
    with pytest.raises(InvalidGrid):
        fit_decay(SampledFunction.zeros(4.0, 1 / 64))


def test_decay_fit_of_function_vanishing_on_the_tail():
    with pytest.raises(DegenerateTail):
        fit_decay(indicator([(0, 0.5)], 8.0, 1 / 64))


def test_haar_scaling_decay(haar_phi):
    fit = fit_decay(haar_phi)
    assert fit.passed
    assert 0.3 < fit.epsilon < 1.0


def test_origin_check_on_haar_wavelet(haar, haar_phi):
    psi = wavelet_from_masks(haar.synthesis[1], haar_phi, haar.spectrum)
    value, ratio, passed = wavelet_origin_check(psi)
    assert value < 1e-12
    assert 0 < ratio < 10
    assert passed


def test_origin_check_flags_nonzero_value():
    assert not wavelet_origin_check(indicator([(-1, 1)], 8.0, 1 / 64)).passed


def test_cascade_increments_shrink(haar):
    increments = cascade_increments(haar.synthesis[0], haar.spectrum, J_max=12, omega=8.0, step=HAAR_STEP)
    assert len(increments) == 12
    assert increments[-1] < increments[0] / 100


def test_mask_hash_identifies_masks(haar):
    low, high = haar.synthesis
    assert mask_hash(low) == mask_hash(TrigPoly(spectrum=Spectrum(N=1, r=1), coeffs={(1, 0): 0.5, (0, 0): 0.5}))
    assert mask_hash(low) != mask_hash(high)


def test_provenance_records_depth_and_grid(haar, haar_phi):
    provenance = cascade_provenance(haar.synthesis[0], 30, haar_phi)
    assert provenance["J"] == 30
    assert provenance["grid"] == {"omega": 8.0, "step": HAAR_STEP, "count": haar_phi.count}
    assert len(provenance["mask_hash"]) == 64
