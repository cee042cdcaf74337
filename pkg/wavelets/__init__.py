"""
Wavelets Module - Nonuniform Multiresolution Toolkit

The numerical core, layered bottom-up:

- spectrum: the translation set Lambda and spectral set Gamma
- freqfield: sampled Fourier transforms and Lambda-periodization
- filterbank: masks, modulation matrices, Haar and Shannon banks
- cascade: scaling functions and wavelets from masks
- transform: projections, expansions and frame estimates
"""

from wavelets.cascade import DecayFit, cascade_scaling, fit_decay, wavelet_from_masks
from wavelets.errors import NumraError
from wavelets.filterbank import FilterBank, SampledPeriodic, TrigPoly, check_pr, haar_bank, shannon_bank
from wavelets.freqfield import SampledFunction, periodize
from wavelets.spectrum import Spectrum, TranslationIndex, validate_spectrum
from wavelets.transform import WaveletSystem, build_system, shannon_system

__all__ = [
    'DecayFit', 'cascade_scaling', 'fit_decay', 'wavelet_from_masks',
    'NumraError',
    'FilterBank', 'SampledPeriodic', 'TrigPoly', 'check_pr', 'haar_bank', 'shannon_bank',
    'SampledFunction', 'periodize',
    'Spectrum', 'TranslationIndex', 'validate_spectrum',
    'WaveletSystem', 'build_system', 'shannon_system',
]
