import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from wavelets.errors import (
    InvalidInterval,
    InvalidWindow,
    NNonPositive,
    NotCoprime,
    RNotOdd,
    ROutOfRange,
)
from wavelets.spectrum import (
    Spectrum,
    TranslationIndex,
    enumerate_lambda,
    exp_inner_product,
    gamma_fourier,
    gamma_indicator,
    gamma_mask,
    gram_matrix,
    gram_matrix_quadrature,
    is_tiling,
    lambda_fraction,
    sort_indices,
    tiling_count,
    translation_window,
    validate_spectrum,
)


@pytest.mark.parametrize("N, r", [(1, 1), (2, 1), (2, 3), (3, 1), (3, 5), (4, 7)])
def test_valid_spectra(N, r):
    s = validate_spectrum(N, r)
    assert (s.N, s.r) == (N, r)
    assert s.dilation == 2 * N
    assert s.offset == Fraction(r, N)


@pytest.mark.parametrize(
    "N, r, error",
    [(0, 1, NNonPositive), (-2, 1, NNonPositive), (2, 2, RNotOdd), (2, 5, ROutOfRange), (3, 3, NotCoprime)],
)
def test_invalid_spectra_name_the_constraint(N, r, error):
    with pytest.raises(error) as info:
        validate_spectrum(N, r)
    assert info.value.code == error.__name__
    assert info.value.exit_code == 2
    assert "constraint" in info.value.to_dict()


@given(st.integers(min_value=1, max_value=15), st.integers(min_value=-5, max_value=40))
@settings(max_examples=200)
def test_validation_accepts_exactly_the_admissible_pairs(N, r):
    admissible = r % 2 == 1 and 1 <= r <= 2 * N - 1 and math.gcd(r, N) == 1
    if admissible:
        assert validate_spectrum(N, r).r == r
    else:
        with pytest.raises((RNotOdd, ROutOfRange, NotCoprime)):
            validate_spectrum(N, r)


def test_translation_index_rejects_k_outside_zero_one():
    with pytest.raises(InvalidWindow):
        TranslationIndex(k=2, n=0)


def test_lambda_values_are_exact(spectrum_n2):
    assert lambda_fraction(spectrum_n2, TranslationIndex(k=1, n=-1)) == Fraction(1, 2) - 2
    assert lambda_fraction(Spectrum(N=3, r=5), TranslationIndex(k=1, n=0)) == Fraction(5, 3)


def test_enumerate_lambda_is_ascending_and_inclusive(spectrum_n2):
    values = [value for _, value in enumerate_lambda(spectrum_n2, 0, 4)]
    assert values == [0.0, 0.5, 2.0, 2.5, 4.0]


def test_enumerate_lambda_rejects_empty_interval(spectrum_n2):
    with pytest.raises(InvalidInterval):
        enumerate_lambda(spectrum_n2, 1, 0)


def test_translation_window_order():
    indices = translation_window(1)
    assert [(i.k, i.n) for i in indices] == [(0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1)]
    assert sort_indices(reversed(indices)) == indices
    with pytest.raises(InvalidWindow):
        translation_window(-1)


@pytest.mark.parametrize("xi, inside", [(0, True), (Fraction(1, 2), False), (1, True), (Fraction(3, 2), False),
                                        (Fraction(-1, 10), False), (Fraction(5, 4), True)])
def test_gamma_is_half_open(spectrum_n2, xi, inside):
    assert gamma_indicator(spectrum_n2, xi) is inside


def test_gamma_mask_matches_exact_membership(spectrum_n2):
    xi = np.arange(-64, 256) / 64
    expected = [gamma_indicator(spectrum_n2, Fraction(i, 64)) for i in range(-64, 256)]
    assert gamma_mask(spectrum_n2, xi).tolist() == expected


def test_gamma_fourier_at_zero_is_measure():
    assert gamma_fourier(Spectrum(N=3, r=1), np.array([0.0]))[0] == 1.0


SPECTRAL_PAIRS = [(1, 1), (2, 1), (3, 1), (3, 5), (4, 3)]


@pytest.mark.parametrize("N, r", SPECTRAL_PAIRS + [(2, 3)])
def test_exponentials_are_orthonormal_on_gamma(N, r):
    gram = gram_matrix(Spectrum(N=N, r=r), 8)
    assert gram.shape == (34, 34)
    assert np.max(np.abs(gram - np.eye(gram.shape[0]))) <= 1e-10


@pytest.mark.parametrize("N, r", SPECTRAL_PAIRS)
def test_quadrature_gram_is_the_identity(N, r):
    gram = gram_matrix_quadrature(Spectrum(N=N, r=r), 8)
    assert np.max(np.abs(gram - np.eye(gram.shape[0]))) <= 1e-6


def test_quadrature_gram_agrees_with_closed_form(spectrum_n2):
    assert_allclose(gram_matrix_quadrature(spectrum_n2, 3), gram_matrix(spectrum_n2, 3), atol=1e-10)


def test_gram_window_must_be_positive(spectrum_n2):
    with pytest.raises(InvalidWindow):
        gram_matrix(spectrum_n2, 0)


def test_exp_inner_product_of_distinct_translations(spectrum_n2):
    assert abs(exp_inner_product(spectrum_n2, Fraction(1, 2), 0)) < 1e-15
    assert exp_inner_product(spectrum_n2, 2, 2) == 1


@pytest.mark.parametrize("N, r", [(1, 1), (2, 1), (2, 3)])
def test_gamma_tiles_for_small_n(N, r):
    assert is_tiling(Spectrum(N=N, r=r))


def test_gamma_does_not_tile_for_n_three():
    s = Spectrum(N=3, r=1)
    counts = tiling_count(s, 12)
    assert not is_tiling(s)
    assert counts.max() == 2
    # xi = 1/10 is covered twice: by lambda = 0 and by lambda = 1/3.
    assert gamma_indicator(s, Fraction(1, 10)) and gamma_indicator(s, Fraction(1, 10) + Fraction(1, 3))
