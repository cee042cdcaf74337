"""
Spectrum - Translation Set and Spectral Set

Role: Arithmetic ground truth
Responsibility: Validates (N, r), enumerates the translation set
Lambda = {r k / N + 2 n}, and answers membership questions for the spectral
set Gamma = [0, 1/2) U [N/2, (N+1)/2).

All translation values are computed as exact fractions; floats are only
produced at the boundary to numpy.
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, ConfigDict, model_validator

from wavelets.errors import (
    InvalidGrid,
    InvalidInterval,
    InvalidWindow,
    NNonPositive,
    NotCoprime,
    RNotOdd,
    ROutOfRange,
)

logger = logging.getLogger(__name__)

Real = Union[int, float, Fraction]

# Relative guard applied before flooring grid coordinates onto the boundary lattice.
_BOUNDARY_GUARD = 1e-9


class Spectrum(BaseModel):
    """
    The pair (N, r). Construction validates every constraint, so an
    instance is always a valid spectrum.
    """

    model_config = ConfigDict(frozen=True)

    N: int
    r: int

    @model_validator(mode="after")
    def _check_constraints(self) -> "Spectrum":
        N, r = self.N, self.r
        if N < 1:
            raise NNonPositive(f"N must be >= 1, got {N}", constraint="N >= 1", N=N, r=r)
        if r % 2 == 0:
            raise RNotOdd(f"r must be odd, got {r}", constraint="r odd", N=N, r=r)
        if not 1 <= r <= 2 * N - 1:
            raise ROutOfRange(
                f"r must satisfy 1 <= r <= {2 * N - 1}, got {r}",
                constraint="1 <= r <= 2N-1", N=N, r=r,
            )
        if math.gcd(r, N) != 1:
            raise NotCoprime(
                f"r and N must be coprime, gcd({r}, {N}) = {math.gcd(r, N)}",
                constraint="gcd(r, N) = 1", N=N, r=r,
            )
        return self

    @property
    def dilation(self) -> int:
        return 2 * self.N

    @property
    def offset(self) -> Fraction:
        """The nonuniform offset r/N."""
        return Fraction(self.r, self.N)

    @property
    def gamma_intervals(self) -> List[Tuple[Fraction, Fraction]]:
        return [
            (Fraction(0), Fraction(1, 2)),
            (Fraction(self.N, 2), Fraction(self.N + 1, 2)),
        ]

    def to_dict(self) -> dict:
        return {"N": self.N, "r": self.r}


class TranslationIndex(BaseModel):
    """Index (k, n) of the translation lambda = r k / N + 2 n."""

    model_config = ConfigDict(frozen=True)

    k: int
    n: int

    @model_validator(mode="after")
    def _check_k(self) -> "TranslationIndex":
        if self.k not in (0, 1):
            raise InvalidWindow(f"translation index k must be 0 or 1, got {self.k}", k=self.k)
        return self

    def sort_key(self) -> Tuple[int, int]:
        return (self.k, self.n)


def validate_spectrum(N: int, r: int) -> Spectrum:
    """Return the Spectrum for (N, r) or raise the error naming the violated constraint."""
    return Spectrum(N=N, r=r)


def lambda_fraction(s: Spectrum, idx: TranslationIndex) -> Fraction:
    return Fraction(s.r * idx.k, s.N) + 2 * idx.n


def lambda_value(s: Spectrum, idx: TranslationIndex) -> float:
    return float(lambda_fraction(s, idx))


def translation_window(window: int) -> List[TranslationIndex]:
    """All indices with |n| <= window, ordered by (k, n)."""
    if window < 0:
        raise InvalidWindow(f"window must be >= 0, got {window}", window=window)
    return [TranslationIndex(k=k, n=n) for k in (0, 1) for n in range(-window, window + 1)]


def lambda_array(s: Spectrum, indices: Sequence[TranslationIndex]) -> np.ndarray:
    return np.array([lambda_value(s, idx) for idx in indices], dtype=float)


def enumerate_lambda(s: Spectrum, lo: Real, hi: Real) -> List[Tuple[TranslationIndex, float]]:
    """All lambda in [lo, hi], ascending, compared exactly."""
    lo_q, hi_q = Fraction(lo), Fraction(hi)
    if lo_q > hi_q:
        raise InvalidInterval(f"empty interval [{lo}, {hi}]", lo=float(lo_q), hi=float(hi_q))

    found: List[Tuple[Fraction, TranslationIndex]] = []
    for k in (0, 1):
        shift = Fraction(s.r * k, s.N)
        n_lo = math.ceil((lo_q - shift) / 2)
        n_hi = math.floor((hi_q - shift) / 2)
        for n in range(n_lo, n_hi + 1):
            idx = TranslationIndex(k=k, n=n)
            found.append((lambda_fraction(s, idx), idx))

    found.sort(key=lambda item: item[0])
    return [(idx, float(value)) for value, idx in found]


def gamma_indicator(s: Spectrum, xi: Real) -> bool:
    """Exact half-open membership in Gamma."""
    x = Fraction(xi)
    return any(a <= x < b for a, b in s.gamma_intervals)


def gamma_mask(s: Spectrum, xi: np.ndarray) -> np.ndarray:
    """
    Vectorized Gamma membership for points of an aligned grid.

    Coordinates are floored onto the half-integer lattice with a small
    upward guard so that grid points meant to sit on a boundary land on
    its closed side.
    """
    u = 2.0 * np.asarray(xi, dtype=float)
    cell = np.floor(u + _BOUNDARY_GUARD * np.maximum(1.0, np.abs(u)))
    return (cell == 0) | (cell == s.N)


def _interval_integral(mu: np.ndarray, a: float, b: float) -> np.ndarray:
    """Integral of exp(2 pi i mu x) over [a, b) for nonzero mu."""
    two_pi_i_mu = 2j * np.pi * mu
    return (np.exp(two_pi_i_mu * b) - np.exp(two_pi_i_mu * a)) / two_pi_i_mu


def gamma_fourier(s: Spectrum, mu: np.ndarray) -> np.ndarray:
    """Integral of exp(2 pi i mu x) over Gamma, with the mu = 0 case exactly |Gamma| = 1."""
    mu = np.asarray(mu, dtype=float)
    out = np.ones(mu.shape, dtype=complex)
    nonzero = mu != 0
    if np.any(nonzero):
        m = mu[nonzero]
        total = np.zeros(m.shape, dtype=complex)
        for a, b in s.gamma_intervals:
            total += _interval_integral(m, float(a), float(b))
        out[nonzero] = total
    return out


def exp_inner_product(s: Spectrum, lam: Real, lam_prime: Real) -> complex:
    """Closed-form inner product of two exponentials over Gamma."""
    mu = Fraction(lam) - Fraction(lam_prime)
    if mu == 0:
        return 1.0 + 0.0j
    return complex(gamma_fourier(s, np.array([float(mu)]))[0])


def gram_matrix(s: Spectrum, window: int) -> np.ndarray:
    if window < 1:
        raise InvalidWindow(f"window must be >= 1, got {window}", window=window)
    indices = translation_window(window)
    lam = [lambda_fraction(s, idx) for idx in indices]
    mu = np.array([[float(a - b) for b in lam] for a in lam])
    gram = gamma_fourier(s, mu)
    np.fill_diagonal(gram, 1.0)
    return gram


def gram_matrix_quadrature(s: Spectrum, window: int, points: int = 128, panels: int = 4) -> np.ndarray:
    """Independent Gauss-Legendre evaluation of the Gram matrix."""
    if window < 1:
        raise InvalidWindow(f"window must be >= 1, got {window}", window=window)
    nodes, weights = leggauss(points)
    xs: List[np.ndarray] = []
    ws: List[np.ndarray] = []
    for a, b in s.gamma_intervals:
        edges = np.linspace(float(a), float(b), panels + 1)
        for left, right in zip(edges[:-1], edges[1:]):
            half = 0.5 * (right - left)
            xs.append(left + half * (nodes + 1.0))
            ws.append(half * weights)
    x = np.concatenate(xs)
    w = np.concatenate(ws)

    lam = lambda_array(s, translation_window(window))
    basis = np.exp(2j * np.pi * np.outer(lam, x))
    return (basis * w) @ basis.conj().T


def tiling_count(s: Spectrum, denominator: int, n_window: int = None) -> np.ndarray:
    """
    Integer count of lambda with xi + lambda in Gamma, at xi = i / denominator
    for i in [0, 2 * denominator). The denominator must be a multiple of 2N.
    """
    D = int(denominator)
    if D <= 0 or D % (2 * s.N) != 0:
        raise InvalidGrid(f"denominator must be a positive multiple of 2N = {2 * s.N}", denominator=D)
    if n_window is None:
        n_window = (s.N + 1) // 4 + 2

    i = np.arange(2 * D, dtype=np.int64)
    counts = np.zeros(i.shape, dtype=np.int64)
    cuts = [(int(a * D), int(b * D)) for a, b in s.gamma_intervals]
    for k in (0, 1):
        base = s.r * k * D // s.N
        for n in range(-n_window, n_window + 1):
            shifted = i + base + 2 * n * D
            for lo, hi in cuts:
                counts += (shifted >= lo) & (shifted < hi)
    return counts


def is_tiling(s: Spectrum) -> bool:
    """True when Gamma tiles the line under Lambda (exact on cells of length 1/(4N))."""
    return bool(np.all(tiling_count(s, 4 * s.N) == 1))


def sort_indices(indices: Iterable[TranslationIndex]) -> List[TranslationIndex]:
    return sorted(indices, key=TranslationIndex.sort_key)
