"""
Filter Bank - Masks and Modulation Matrices

Role: Multichannel filters
Responsibility: Evaluates masks (finite Lambda trig polynomials or sampled
periodic functions), assembles the 2N x 2N modulation matrices, checks the
perfect-reconstruction identity and the refinement relation, and builds the
self-dual Shannon-type bank.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from utils.report_export import ConditionEntry
from wavelets.config import config
from wavelets.errors import InvalidGrid, NotATile, UnalignedQuery, WrongChannelCount
from wavelets.freqfield import SampledFunction, indicator
from wavelets.spectrum import Spectrum, TranslationIndex, is_tiling, lambda_value

logger = logging.getLogger(__name__)

_ALIGN_SLACK = 1e-9


class TrigPoly(BaseModel):
    """m(xi) = sum of a_lambda exp(-2 pi i lambda xi) over finitely many lambda."""

    model_config = ConfigDict(frozen=True)

    spectrum: Spectrum
    coeffs: Dict[Tuple[int, int], complex]

    @field_validator("coeffs", mode="before")
    @classmethod
    def _normalize_keys(cls, value):
        normalized = {}
        for key, coefficient in dict(value).items():
            if isinstance(key, TranslationIndex):
                key = (key.k, key.n)
            k, n = int(key[0]), int(key[1])
            TranslationIndex(k=k, n=n)
            normalized[(k, n)] = complex(coefficient)
        return normalized

    def terms(self) -> List[Tuple[TranslationIndex, complex]]:
        return [(TranslationIndex(k=k, n=n), a) for (k, n), a in sorted(self.coeffs.items())]

    def evaluate(self, xi):
        x = np.asarray(xi, dtype=float)
        total = np.zeros(x.shape, dtype=complex)
        for idx, a in self.terms():
            total += a * np.exp(-2j * np.pi * lambda_value(self.spectrum, idx) * x)
        return complex(total) if total.ndim == 0 else total

    def split(self) -> Tuple["TrigPoly", "TrigPoly"]:
        """(m1, m2) with m(xi) = m1(xi) + exp(-2 pi i r xi / N) m2(xi); both use only k = 0 terms."""
        lower = {(0, n): a for (k, n), a in self.coeffs.items() if k == 0}
        upper = {(0, n): a for (k, n), a in self.coeffs.items() if k == 1}
        return (TrigPoly(spectrum=self.spectrum, coeffs=lower),
                TrigPoly(spectrum=self.spectrum, coeffs=upper))

    def to_dict(self) -> dict:
        return {
            "type": "trigpoly",
            "coeffs": [
                {"k": idx.k, "n": idx.n, "re": a.real, "im": a.imag} for idx, a in self.terms()
            ],
        }


class SampledPeriodic(BaseModel):
    """
    Samples over one period [0, period).

    Point mode answers only queries that land on a sample. Piecewise-constant
    mode treats sample i as the value on [i*step, (i+1)*step).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    period: float
    step: float
    samples: np.ndarray
    piecewise_constant: bool = False

    @field_validator("samples", mode="before")
    @classmethod
    def _to_complex(cls, value):
        array = np.array(value, dtype=complex).reshape(-1)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_size(self) -> "SampledPeriodic":
        units = self.period / self.step
        if self.period <= 0 or self.step <= 0 or abs(units - round(units)) > _ALIGN_SLACK * units:
            raise InvalidGrid("step must divide the period", period=self.period, step=self.step)
        if self.samples.size != round(units):
            raise InvalidGrid(
                f"expected {round(units)} samples per period, got {self.samples.size}",
                period=self.period, step=self.step,
            )
        return self

    def evaluate(self, xi):
        x = np.mod(np.asarray(xi, dtype=float), self.period)
        units = x / self.step
        count = self.samples.size
        if self.piecewise_constant:
            index = np.floor(units + _ALIGN_SLACK * np.maximum(1.0, units)).astype(np.int64)
        else:
            index = np.round(units).astype(np.int64)
            off_grid = np.abs(units - index) > _ALIGN_SLACK * np.maximum(1.0, units)
            if np.any(off_grid):
                bad = float(np.asarray(xi, dtype=float).reshape(-1)[np.argmax(off_grid.reshape(-1))])
                raise UnalignedQuery(
                    f"xi={bad} is not on the mask grid (step {self.step})", xi=bad, step=self.step
                )
        values = self.samples[np.mod(index, count)]
        return complex(values) if values.ndim == 0 else values

    def to_dict(self) -> dict:
        return {
            "type": "sampled",
            "period": self.period,
            "step": self.step,
            "piecewise_constant": self.piecewise_constant,
            "samples": [[v.real, v.imag] for v in self.samples],
        }


PeriodicFunction = Union[TrigPoly, SampledPeriodic]


def evaluate_mask(m: PeriodicFunction, xi):
    return m.evaluate(xi)


class FilterBank(BaseModel):
    """Analysis masks m~_0..m~_{2N-1} and synthesis masks m_0..m_{2N-1}; index 0 is lowpass."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spectrum: Spectrum
    analysis: List[PeriodicFunction]
    synthesis: List[PeriodicFunction]

    @model_validator(mode="after")
    def _check_channels(self) -> "FilterBank":
        expected = self.spectrum.dilation
        for side, masks in (("analysis", self.analysis), ("synthesis", self.synthesis)):
            if len(masks) != expected:
                raise WrongChannelCount(
                    f"{side} side has {len(masks)} masks, expected 2N = {expected}",
                    side=side, found=len(masks), expected=expected,
                )
        return self

    @property
    def channels(self) -> int:
        return self.spectrum.dilation

    def swapped(self) -> "FilterBank":
        return FilterBank(spectrum=self.spectrum, analysis=self.synthesis, synthesis=self.analysis)

    def is_self_dual(self) -> bool:
        return all(a is b for a, b in zip(self.analysis, self.synthesis))


class ModulationMatrix(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    at: float
    entries: np.ndarray
    offsets: List[float]


def modulation_offsets(s: Spectrum, scheme: str = "coset") -> List[Fraction]:
    """
    Column offsets of the modulation matrix.

    "coset": representatives tau with Lambda/(2N) the disjoint union of
    tau + Lambda; for N = 1 these are {0, 1/2}.
    "quarter": s/(4N) for s = 0..2N-1.
    """
    N, r = s.N, s.r
    if scheme == "coset":
        return [Fraction(2 * j * r, N) + Fraction(k * r, 2 * N * N) for j in range(N) for k in (0, 1)]
    if scheme == "quarter":
        return [Fraction(col, 4 * N) for col in range(2 * N)]
    raise ValueError(f"unknown offset scheme {scheme!r}")


def _require_channels(masks: Sequence[PeriodicFunction], s: Spectrum) -> None:
    if len(masks) != s.dilation:
        raise WrongChannelCount(
            f"got {len(masks)} masks, expected 2N = {s.dilation}", found=len(masks), expected=s.dilation
        )


def _matrices(masks: Sequence[PeriodicFunction], s: Spectrum, xi: np.ndarray, scheme: str) -> np.ndarray:
    """Stack of modulation matrices, shape (len(xi), 2N, 2N)."""
    _require_channels(masks, s)
    offsets = np.array([float(t) for t in modulation_offsets(s, scheme)])
    points = np.asarray(xi, dtype=float)[:, None] / s.dilation + offsets[None, :]
    rows = [np.asarray(m.evaluate(points), dtype=complex) for m in masks]
    return np.stack(rows, axis=1)


def modulation_matrix(masks: Sequence[PeriodicFunction], s: Spectrum, xi: float, scheme: str = "coset") -> ModulationMatrix:
    entries = _matrices(masks, s, np.array([xi]), scheme)[0]
    return ModulationMatrix(
        at=float(xi), entries=entries, offsets=[float(t) for t in modulation_offsets(s, scheme)]
    )


def pr_grid(s: Spectrum, step: Optional[float] = None) -> np.ndarray:
    """One full period of the matrix argument: xi in [0, 4N) so xi/(2N) covers [0, 2)."""
    h = float(config.default_step(s.N)) if step is None else step
    return np.arange(round(2 * s.dilation / h)) * h


def check_pr(
    bank: FilterBank,
    grid: Optional[Sequence[float]] = None,
    tol: float = 1e-12,
    scheme: str = "coset",
) -> ConditionEntry:
    """max |M(xi) conj(M~(xi))^T - I| over the grid."""
    s = bank.spectrum
    xi = pr_grid(s) if grid is None else np.asarray(grid, dtype=float)
    M = _matrices(bank.synthesis, s, xi, scheme)
    M_dual = _matrices(bank.analysis, s, xi, scheme)
    product = M @ np.conj(np.transpose(M_dual, (0, 2, 1)))
    deviation = float(np.max(np.abs(product - np.eye(s.dilation)[None, :, :])))
    min_det = float(np.min(np.abs(np.linalg.det(M))))
    logger.debug("PR check over %d points: deviation %.3e, min |det| %.3e", xi.size, deviation, min_det)
    return ConditionEntry(
        name="perfect_reconstruction",
        anchor="M(xi) conj(M~(xi))^T = I",
        parameters={"grid_points": int(xi.size), "scheme": scheme},
        max_deviation=deviation,
        tolerance=tol,
        details={"min_abs_det": min_det},
    )


def refinement_residual(phi: SampledFunction, m0: PeriodicFunction, s: Spectrum) -> float:
    """
    max |phi(xi) - m0(xi/2N) phi(xi/2N)| over grid points xi = m*step with
    2N dividing m, the part of the grid closed under division by 2N.
    """
    dilation = s.dilation
    offsets = np.arange(-phi.half, phi.half + 1)
    offsets = offsets[offsets % dilation == 0]
    xi = offsets * phi.step
    coarse = phi.samples[phi.half + offsets // dilation]
    predicted = np.asarray(m0.evaluate(xi / dilation), dtype=complex) * coarse
    return float(np.max(np.abs(phi.samples[phi.half + offsets] - predicted)))


def _shannon_tiles(s: Spectrum) -> List[List[int]]:
    """
    Split the cells of 2N*Gamma outside Gamma into 2N - 1 Lambda tiles.

    Cells have length 1/(2N); a set of cells tiles iff every residue mod 4N
    is covered exactly once, where cell t covers t and t - 2r.
    """
    N, r = s.N, s.r
    modulus = 4 * N
    gamma_cells = list(range(0, N)) + list(range(N * N, N * N + N))
    scaled = list(range(0, 2 * N * N)) + list(range(2 * N ** 3, 2 * N ** 3 + 2 * N * N))
    remaining = sorted(set(scaled) - set(gamma_cells))

    tiles: List[List[int]] = [[] for _ in range(2 * N - 1)]
    covered: List[set] = [set() for _ in range(2 * N - 1)]

    def place(position: int) -> bool:
        if position == len(remaining):
            return all(len(c) == modulus for c in covered)
        cell = remaining[position]
        residues = {cell % modulus, (cell - 2 * r) % modulus}
        tried_empty = False
        for tile, cover in zip(tiles, covered):
            if not tile:
                if tried_empty:
                    continue
                tried_empty = True
            if residues & cover:
                continue
            tile.append(cell)
            cover.update(residues)
            if place(position + 1):
                return True
            tile.pop()
            cover.difference_update(residues)
        return False

    if not place(0):
        raise NotATile(f"no Lambda-tile partition of 2N*Gamma for N={N}, r={r}", N=N, r=r)
    return [gamma_cells] + tiles


def _tiling_representative(s: Spectrum, eta: Fraction) -> Fraction:
    """The unique point of (eta + Lambda) inside Gamma."""
    for k in (0, 1):
        shift = Fraction(s.r * k, s.N)
        for a, b in s.gamma_intervals:
            n = math.ceil((a - eta - shift) / 2)
            candidate = eta + shift + 2 * n
            if a <= candidate < b:
                return candidate
    raise NotATile(f"no translate of {eta} lands in Gamma", N=s.N, r=s.r)


def shannon_bank(
    s: Spectrum, omega: Optional[float] = None, step: Optional[float] = None
) -> Tuple[FilterBank, SampledFunction, SampledFunction]:
    """
    Self-dual bank with phi_hat = 1_Gamma. Channel l owns the cell set C_l of
    2N*Gamma (C_0 = Gamma) and its mask is m_l(x) = sum over lambda of
    1_{C_l/2N}(x + lambda), stored with period 2 on cells of length 1/(4N^2).
    """
    if not is_tiling(s):
        raise NotATile(f"Gamma does not tile under Lambda for N={s.N}, r={s.r}", N=s.N, r=s.r)

    tiles = _shannon_tiles(s)
    owner = {cell: channel for channel, cells in enumerate(tiles) for cell in cells}
    resolution = 4 * s.N * s.N
    period_cells = 2 * resolution

    samples = np.zeros((s.dilation, period_cells))
    for i in range(period_cells):
        rho = _tiling_representative(s, Fraction(i, resolution))
        channel = owner.get(int(rho * resolution))
        if channel is not None:
            samples[channel, i] = 1.0

    masks = [
        SampledPeriodic(period=2.0, step=1.0 / resolution, samples=row, piecewise_constant=True)
        for row in samples
    ]
    bank = FilterBank(spectrum=s, analysis=masks, synthesis=masks)

    h = float(config.default_step(s.N)) if step is None else step
    w = float(config.omega) if omega is None else omega
    phi = indicator(s.gamma_intervals, w, h)
    logger.info("built Shannon bank for N=%d, r=%d with %d channels", s.N, s.r, s.dilation)
    return bank, phi, phi


def shannon_cells(s: Spectrum) -> List[List[Tuple[Fraction, Fraction]]]:
    """Frequency intervals owned by each channel (channel 0 is Gamma)."""
    delta = Fraction(1, 2 * s.N)
    return [[(c * delta, (c + 1) * delta) for c in sorted(cells)] for cells in _shannon_tiles(s)]


def haar_bank() -> FilterBank:
    """The orthonormal Haar bank for N = 1, where Lambda is the integers."""
    s = Spectrum(N=1, r=1)
    lowpass = TrigPoly(spectrum=s, coeffs={(0, 0): 0.5, (1, 0): 0.5})
    highpass = TrigPoly(spectrum=s, coeffs={(0, 0): 0.5, (1, 0): -0.5})
    masks = [lowpass, highpass]
    return FilterBank(spectrum=s, analysis=masks, synthesis=masks)
