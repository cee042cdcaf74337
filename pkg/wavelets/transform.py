"""
Transform - Multiresolution Projections and Wavelet Expansions

Role: Signal-level checks
Responsibility: Evaluates dilated and translated atoms in frequency, computes
coefficients, projections onto the approximation spaces, one-level and
multi-level expansions, cross-scale biorthogonality and empirical frame
bounds, and generates the seeded test signals those checks consume.

Atoms of level j and translation lambda are

    (2N)^(-j/2) g((2N)^(-j) xi) exp(-2 pi i lambda (2N)^(-j) xi)

with g the scaling function (channel 0) or wavelet l (channel l >= 1).

Sums over all of Lambda are evaluated in closed form. With s = (2N)^j,

    sum_lambda <f, g~_{j,lambda}> g_{j,lambda}(xi)
        = g(xi/s) * sum_m w_m f(xi - m s/2) conj(g~((xi - m s/2)/s)),
    w_m = (1 + exp(-i pi r m / N)) / 2,

so on a grid whose step divides s/2 the full sum is a finite fold of the
samples and is exact for signals that vanish outside the grid. A finite
window |n| <= w gives the truncated sum instead.

Blocks for one (channel, level) pair are independent and run on a thread
pool; partial sums are reduced in block order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from wavelets.cascade import cascade_values, check_normalized
from wavelets.config import config
from wavelets.errors import (
    GridMismatch,
    InvalidGrid,
    InvalidInterval,
    InvalidWindow,
    StepNotAligned,
    WrongChannelCount,
    ZeroSignal,
)
from wavelets.filterbank import FilterBank, PeriodicFunction, TrigPoly, shannon_bank, shannon_cells
from wavelets.freqfield import SampledFunction, default_grid
from wavelets.spectrum import Spectrum, TranslationIndex, lambda_array, lambda_value, translation_window

logger = logging.getLogger(__name__)

Generator = Callable[[np.ndarray], np.ndarray]
# Piecewise-constant function of time: [(a, b, value)] on half-open [a, b).
Pieces = List[Tuple[float, float, complex]]

_ZERO = 1e-14
_GUARD = 1e-9
# Frequency width of the triangular smoothing kernel and of the band-edge ramps.
_SMOOTHING = 0.25
_SIGNAL_FLOOR = 0.25


class WaveletSystem(BaseModel):
    """Frequency generators of a biorthogonal wavelet system."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spectrum: Spectrum
    bank: Optional[FilterBank] = None
    phi: Generator
    phi_dual: Generator
    psi: List[Generator]
    psi_dual: List[Generator]
    label: str = "custom"
    # Largest |xi| where a generator can be nonzero; None when they have tails.
    support: Optional[float] = None
    # (primal, dual) time-domain generators per channel, when known in closed form.
    time_pieces: Optional[Tuple[List[Any], List[Any]]] = None

    @model_validator(mode="after")
    def _check_wavelets(self) -> "WaveletSystem":
        expected = self.spectrum.dilation - 1
        for side, generators in (("primal", self.psi), ("dual", self.psi_dual)):
            if len(generators) != expected:
                raise WrongChannelCount(
                    f"{side} side has {len(generators)} wavelets, expected 2N - 1 = {expected}",
                    side=side, found=len(generators), expected=expected,
                )
        return self

    @property
    def channels(self) -> int:
        return self.spectrum.dilation

    def generator(self, channel: int, dual: bool = False) -> Generator:
        if not 0 <= channel < self.channels:
            raise WrongChannelCount(
                f"channel {channel} out of range for 2N = {self.channels}", found=channel, expected=self.channels
            )
        if channel == 0:
            return self.phi_dual if dual else self.phi
        return (self.psi_dual if dual else self.psi)[channel - 1]

    def is_self_dual(self) -> bool:
        if self.bank is not None and self.bank.is_self_dual():
            return True
        return self.phi is self.phi_dual and all(a is b for a, b in zip(self.psi, self.psi_dual))


class Atom(BaseModel):
    model_config = ConfigDict(frozen=True)

    channel: int
    level: int
    translation: TranslationIndex


class FrameEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    sample_count: int
    levels: List[int]
    window: Optional[int]


class CrossBiorthogonality(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_deviation: float
    diagonal_deviation: float
    atom_count: int
    method: str
    omega: Optional[float] = None
    step: Optional[float] = None


class FrameChain(BaseModel):
    """
    Largest value of (|<u, f>|^2 / (B~ ||f||^2) - sum |<f, psi>|^2) / ||f||^2 over
    the signals, u = sum <f, psi> psi~ over the level range; <= 0 when the chain holds.
    """

    model_config = ConfigDict(frozen=True)

    max_violation: float
    dual_upper: float


def _cascade_scaling(m0: PeriodicFunction, s: Spectrum, depth: int, xi) -> np.ndarray:
    return cascade_values(m0, s, depth, xi)


def _cascade_wavelet(m: PeriodicFunction, m0: PeriodicFunction, s: Spectrum, depth: int, xi) -> np.ndarray:
    coarse = np.asarray(xi, dtype=float) / s.dilation
    return np.asarray(m.evaluate(coarse), dtype=complex) * cascade_values(m0, s, depth, coarse)


def _lambda_terms(s: Spectrum, m: PeriodicFunction) -> Optional[Dict[float, complex]]:
    if not isinstance(m, TrigPoly):
        return None
    terms: Dict[float, complex] = {}
    for idx, value in m.terms():
        if abs(value) > _ZERO:
            lam = lambda_value(s, idx)
            terms[lam] = terms.get(lam, 0j) + value
    return terms


def _is_box(terms: Dict[float, complex]) -> bool:
    return set(terms) == {0.0, 1.0} and all(abs(value - 0.5) <= _ZERO for value in terms.values())


def box_time_pieces(bank: FilterBank) -> Optional[Tuple[List[Pieces], List[Pieces]]]:
    """
    Time-domain generators when N = 1 and both lowpass masks are the
    two-tap box filter, so phi = 1 on [0, 1) and each wavelet is the step
    function sum of 2 h_lambda phi(2t - lambda). None for any other bank.
    """
    s = bank.spectrum
    if s.N != 1:
        return None
    sides = []
    for masks in (bank.synthesis, bank.analysis):
        terms = [_lambda_terms(s, m) for m in masks]
        if any(t is None for t in terms) or not _is_box(terms[0]):
            return None
        D = s.dilation
        wavelets = [
            [(lam / D, (lam + 1) / D, D * value) for lam, value in sorted(t.items())]
            for t in terms[1:]
        ]
        sides.append([[(0.0, 1.0, 1.0 + 0j)]] + wavelets)
    return sides[0], sides[1]


def _band_limit(s: Spectrum, generators: Sequence[Generator]) -> Optional[float]:
    """
    Top of (2N) Gamma when every generator vanishes on the cell midpoints
    beyond it, up to four times that height; None otherwise.
    """
    top = s.dilation * (s.N + 1) / 2
    cell = 1.0 / (4 * s.N)
    count = int(round(4 * top / cell))
    xi = (np.arange(-count, count) + 0.5) * cell
    outside = np.abs(xi) > top
    for g in generators:
        if np.any(np.abs(np.asarray(g(xi[outside]))) > _ZERO):
            return None
    return float(top)


def build_system(bank: FilterBank, J: Optional[int] = None) -> WaveletSystem:
    """Generators from cascade products; exact at any xi up to the depth J."""
    depth = config.cascade_depth if J is None else J
    if depth < 1:
        raise InvalidWindow(f"cascade depth must be >= 1, got {depth}", J=depth)
    s = bank.spectrum
    m0, m0_dual = bank.synthesis[0], bank.analysis[0]
    check_normalized(m0)
    check_normalized(m0_dual)
    phi = partial(_cascade_scaling, m0, s, depth)
    phi_dual = partial(_cascade_scaling, m0_dual, s, depth)
    psi = [partial(_cascade_wavelet, m, m0, s, depth) for m in bank.synthesis[1:]]
    psi_dual = [partial(_cascade_wavelet, m, m0_dual, s, depth) for m in bank.analysis[1:]]
    return WaveletSystem(
        spectrum=s,
        bank=bank,
        phi=phi,
        phi_dual=phi_dual,
        psi=psi,
        psi_dual=psi_dual,
        label="cascade",
        support=_band_limit(s, [phi, phi_dual, *psi, *psi_dual]),
        time_pieces=box_time_pieces(bank),
    )


def _interval_indicator(intervals, xi) -> np.ndarray:
    x = np.asarray(xi, dtype=float)
    guard = _GUARD * np.maximum(1.0, np.abs(x))
    out = np.zeros(x.shape, dtype=complex)
    for a, b in intervals:
        out[(x >= float(a) - guard) & (x < float(b) - guard)] = 1.0
    return out


def shannon_system(s: Spectrum) -> WaveletSystem:
    """Self-dual system of exact indicators: phi = 1_Gamma, psi_l = 1 on the cells of channel l."""
    bank, _, _ = shannon_bank(s)
    cells = shannon_cells(s)
    phi = partial(_interval_indicator, s.gamma_intervals)
    psi = [partial(_interval_indicator, owned) for owned in cells[1:]]
    support = max(b for owned in cells for _, b in owned)
    return WaveletSystem(
        spectrum=s, bank=bank, phi=phi, phi_dual=phi, psi=psi, psi_dual=psi,
        label="shannon", support=float(support),
    )


def _max_lambda(s: Spectrum, indices: Sequence[TranslationIndex]) -> float:
    return float(np.max(np.abs(lambda_array(s, indices)))) if indices else 0.0


def _check_resolved(s: Spectrum, level: int, indices: Sequence[TranslationIndex], step: float) -> None:
    """The fastest atom phase must stay below half a cycle per grid step."""
    cycles = _max_lambda(s, indices) * step / float(s.dilation) ** level
    if cycles >= 0.5:
        raise InvalidGrid(
            f"level {level} atoms turn {cycles:.3f} cycles per step; the grid aliases them",
            level=level, step=step, window=max((idx.n for idx in indices), default=0),
        )


def _block(
    system: WaveletSystem,
    channel: int,
    level: int,
    indices: Sequence[TranslationIndex],
    grid: np.ndarray,
    dual: bool,
) -> np.ndarray:
    """Atom samples, one row per translation."""
    if grid.size > 1:
        _check_resolved(system.spectrum, level, indices, float(grid[1] - grid[0]))
    scale = float(system.spectrum.dilation) ** level
    coarse = grid / scale
    base = np.asarray(system.generator(channel, dual)(coarse), dtype=complex) * scale ** -0.5
    lam = lambda_array(system.spectrum, indices)
    return np.exp(-2j * np.pi * np.outer(lam, coarse)) * base[None, :]


def _lambda_weights(s: Spectrum) -> np.ndarray:
    """w_c = (1 + exp(-i pi r c / N)) / 2 for c = 0..2N-1; exactly 1 or 0 where the phase is real."""
    period = s.dilation
    weights = np.empty(period, dtype=complex)
    for c in range(period):
        turn = (s.r * c) % period
        if turn == 0:
            weights[c] = 1.0
        elif turn == s.N:
            weights[c] = 0.0
        else:
            weights[c] = 0.5 * (1.0 + np.exp(-1j * np.pi * turn / s.N))
    return weights


def _lambda_sum(values: np.ndarray, s: Spectrum, shift: int) -> np.ndarray:
    """sum over m of w_m * values[..., i - m * shift], folded modulo 2N * shift."""
    count = values.shape[-1]
    if shift >= count:
        return values.astype(complex)
    weights = _lambda_weights(s)
    period = weights.size * shift
    length = -(-count // period) * period
    padded = np.zeros(values.shape[:-1] + (length,), dtype=complex)
    padded[..., :count] = values
    folded = padded.reshape(values.shape[:-1] + (-1, period)).sum(axis=-2)
    index = np.arange(count)
    total = np.zeros(values.shape, dtype=complex)
    for c, weight in enumerate(weights):
        if weight != 0:
            total += weight * folded[..., (index - c * shift) % period]
    return total


def _shift_steps(s: Spectrum, level: int, step: float) -> int:
    """Grid steps in (2N)^j / 2, the half period of the level-j translations."""
    half = float(Fraction(s.dilation) ** level) / 2
    ratio = half / step
    nearest = round(ratio)
    if nearest < 1 or abs(ratio - nearest) > _GUARD * max(1.0, ratio):
        raise StepNotAligned(
            f"level {level} needs a step dividing {half!r}, got {step!r}", level=level, step=step
        )
    return int(nearest)


def aligned_levels(system: WaveletSystem, step: float, levels: Sequence[int]) -> List[int]:
    """The levels whose translation half period is a whole number of grid steps."""
    kept = []
    for j in levels:
        try:
            _shift_steps(system.spectrum, j, step)
        except StepNotAligned:
            continue
        kept.append(int(j))
    return kept


def _trapezoid_weights(count: int, step: float) -> np.ndarray:
    weights = np.full(count, step)
    weights[0] = weights[-1] = 0.5 * step
    return weights


def _analyze(signals: np.ndarray, atoms: np.ndarray, step: float) -> np.ndarray:
    """Inner products <signal, atom>, shape (signals, atoms)."""
    weights = _trapezoid_weights(signals.shape[-1], step)
    return (signals * weights[None, :]) @ atoms.conj().T


def _run_blocks(fn, blocks: Sequence) -> list:
    if not blocks:
        return []
    workers = max(1, min(config.threads, len(blocks)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def _window(window: Optional[int]) -> int:
    value = config.lambda_window if window is None else window
    if value < 0:
        raise InvalidWindow(f"window must be >= 0, got {value}", window=value)
    return value


def _levels(levels: Optional[Sequence[int]]) -> List[int]:
    return list(range(config.j_lo, config.j_hi + 1)) if levels is None else [int(j) for j in levels]


def _detail_blocks(system: WaveletSystem, levels: Sequence[int]) -> List[Tuple[int, int]]:
    return [(channel, level) for level in levels for channel in range(1, system.channels)]


def _require_signal(f: SampledFunction) -> float:
    norm = f.norm()
    if norm <= _ZERO:
        raise ZeroSignal("signal has zero norm", omega=f.omega, step=f.step)
    return norm


def atom_frequency(
    system: WaveletSystem,
    atom: Atom,
    omega: Optional[float] = None,
    step: Optional[float] = None,
    dual: bool = False,
) -> SampledFunction:
    w, h = default_grid(system.spectrum, omega, step)
    grid = SampledFunction.grid_points(w, h)
    samples = _block(system, atom.channel, atom.level, [atom.translation], grid, dual)[0]
    return SampledFunction(omega=w, step=h, samples=samples)


def coefficient(f: SampledFunction, system: WaveletSystem, atom: Atom, dual: bool = True) -> complex:
    samples = _block(system, atom.channel, atom.level, [atom.translation], f.grid, dual)
    return complex(_analyze(f.samples[None, :], samples, f.step)[0, 0])


def _folded_part(
    matrix: np.ndarray,
    grid: np.ndarray,
    step: float,
    system: WaveletSystem,
    analysis_dual: bool,
    synthesis_dual: bool,
    block: Tuple[int, int],
) -> np.ndarray:
    """Full Lambda sum of one (channel, level) block for every row of the matrix."""
    channel, level = block
    shift = _shift_steps(system.spectrum, level, step)
    coarse = grid / float(system.spectrum.dilation) ** level
    analysis = np.asarray(system.generator(channel, analysis_dual)(coarse), dtype=complex)
    if synthesis_dual == analysis_dual:
        synthesis = analysis
    else:
        synthesis = np.asarray(system.generator(channel, synthesis_dual)(coarse), dtype=complex)
    return synthesis[None, :] * _lambda_sum(matrix * analysis.conj()[None, :], system.spectrum, shift)


def _truncated_part(
    matrix: np.ndarray,
    grid: np.ndarray,
    step: float,
    system: WaveletSystem,
    indices: Sequence[TranslationIndex],
    dual: bool,
    block: Tuple[int, int],
) -> np.ndarray:
    channel, level = block
    analysis = _block(system, channel, level, indices, grid, not dual)
    synthesis = _block(system, channel, level, indices, grid, dual)
    return _analyze(matrix, analysis, step) @ synthesis


def _part(
    matrix: np.ndarray,
    grid: np.ndarray,
    step: float,
    system: WaveletSystem,
    window: Optional[int],
    dual: bool,
    block: Tuple[int, int],
) -> np.ndarray:
    """sum <f, g~> g for one block (roles swapped when dual); window None sums all of Lambda."""
    if window is None:
        return _folded_part(matrix, grid, step, system, not dual, dual, block)
    return _truncated_part(matrix, grid, step, system, translation_window(_window(window)), dual, block)


def _parts_sum(
    matrix: np.ndarray,
    grid: np.ndarray,
    step: float,
    system: WaveletSystem,
    blocks: Sequence[Tuple[int, int]],
    window: Optional[int],
    dual: bool,
) -> np.ndarray:
    total = np.zeros(matrix.shape, dtype=complex)
    for part in _run_blocks(partial(_part, matrix, grid, step, system, window, dual), blocks):
        total += part
    return total


def project(
    f: SampledFunction,
    system: WaveletSystem,
    j: int,
    window: Optional[int] = None,
    dual: bool = False,
) -> SampledFunction:
    """P_j f from the dual scaling atoms; dual=True swaps the roles. window=None sums all of Lambda."""
    return f.with_samples(_part(f.samples[None, :], f.grid, f.step, system, window, dual, (0, j))[0])


def _detail_samples(
    f: SampledFunction, system: WaveletSystem, levels: Sequence[int], window: Optional[int], dual: bool
) -> np.ndarray:
    blocks = _detail_blocks(system, levels)
    return _parts_sum(f.samples[None, :], f.grid, f.step, system, blocks, window, dual)[0]


def one_level_residual(
    f: SampledFunction, system: WaveletSystem, window: Optional[int] = None, dual: bool = False
) -> float:
    """||P_1 f - P_0 f - (level-0 details)|| / ||f||."""
    norm = _require_signal(f)
    if window is None:
        coarse_window = fine_window = None
    else:
        coarse_window = _window(window)
        # Level-1 translations 2N*lambda of the level-0 window stay within this window.
        fine_window = system.channels * (coarse_window + 1)
    fine = project(f, system, 1, fine_window, dual)
    coarse = project(f, system, 0, coarse_window, dual)
    detail = _detail_samples(f, system, [0], coarse_window, dual)
    residual = fine.samples - coarse.samples - detail
    return f.with_samples(residual).norm() / norm


def _level_range(j_lo: Optional[int], j_hi: Optional[int]) -> Tuple[int, int]:
    lo = config.j_lo if j_lo is None else j_lo
    hi = config.j_hi if j_hi is None else j_hi
    if lo >= hi:
        raise InvalidWindow(f"need j_lo < j_hi, got [{lo}, {hi}]", j_lo=lo, j_hi=hi)
    return lo, hi


def expand(
    f: SampledFunction,
    system: WaveletSystem,
    j_lo: Optional[int] = None,
    j_hi: Optional[int] = None,
    window: Optional[int] = None,
) -> Tuple[SampledFunction, float]:
    """Wavelet expansion over levels j_lo..j_hi and its relative residual."""
    lo, hi = _level_range(j_lo, j_hi)
    norm = f.norm()
    if norm <= _ZERO:
        return SampledFunction.zeros(f.omega, f.step), 0.0
    approximation = f.with_samples(_detail_samples(f, system, range(lo, hi + 1), window, False))
    return approximation, (f - approximation).norm() / norm


def telescoping_residual(
    f: SampledFunction, system: WaveletSystem, j_lo: Optional[int] = None, j_hi: Optional[int] = None
) -> float:
    """||details over j_lo..j_hi - (P_{j_hi+1} f - P_{j_lo} f)|| / ||f||, all Lambda sums in full."""
    lo, hi = _level_range(j_lo, j_hi)
    norm = _require_signal(f)
    details = _detail_samples(f, system, range(lo, hi + 1), None, False)
    fine = project(f, system, hi + 1)
    coarse = project(f, system, lo)
    return f.with_samples(details - fine.samples + coarse.samples).norm() / norm


def atom_grid(system: WaveletSystem, levels: Sequence[int], window: int) -> Tuple[float, float]:
    """
    (omega, step) of the smallest grid holding every atom of the set: omega
    reaches the support at the finest level, and the step splits the
    coarsest cells finely enough that no atom phase aliases.
    """
    if system.support is None:
        raise InvalidGrid("generators are not compactly supported; pass omega and step", label=system.label)
    s = system.spectrum
    D = Fraction(s.dilation)
    fastest = _max_lambda(s, translation_window(_window(window)))
    refine = 1
    while fastest >= s.N * refine:
        refine *= 2
    step = D ** min(levels) / (2 * s.N * refine)
    support = Fraction(system.support).limit_denominator(4 * s.N)
    return float(support * D ** max(levels)), float(step)


def alias_free_step(system: WaveletSystem, levels: Sequence[int], window: int, step: float) -> float:
    """step halved until the window's atoms resolve at the coarsest level."""
    fastest = _max_lambda(system.spectrum, translation_window(_window(window)))
    coarsest = float(system.spectrum.dilation) ** min(levels)
    while fastest * step / coarsest >= 0.5:
        step /= 2
    return step


def _atom_matrix(
    system: WaveletSystem, levels: Sequence[int], indices: Sequence[TranslationIndex], grid: np.ndarray, dual: bool
) -> np.ndarray:
    blocks = _detail_blocks(system, levels)
    rows = _run_blocks(lambda block: _block(system, block[0], block[1], indices, grid, dual), blocks)
    return np.vstack(rows)


def _time_atoms(
    system: WaveletSystem, pieces: List[Pieces], levels: Sequence[int], indices: Sequence[TranslationIndex]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(atom id, start, end, value) of every piece of (2N)^(j/2) g((2N)^j t - lambda)."""
    ids, starts, ends, values = [], [], [], []
    lam = lambda_array(system.spectrum, indices)
    atom = 0
    for channel, level in _detail_blocks(system, levels):
        scale = float(system.spectrum.dilation) ** level
        for shift in lam:
            for a, b, value in pieces[channel]:
                ids.append(atom)
                starts.append((a + shift) / scale)
                ends.append((b + shift) / scale)
                values.append(value * scale ** 0.5)
            atom += 1
    return np.array(ids), np.array(starts), np.array(ends), np.array(values, dtype=complex)


def _time_gram(system: WaveletSystem, levels: Sequence[int], indices: Sequence[TranslationIndex]) -> np.ndarray:
    primal_pieces, dual_pieces = system.time_pieces
    p_id, p_lo, p_hi, p_val = _time_atoms(system, primal_pieces, levels, indices)
    d_id, d_lo, d_hi, d_val = _time_atoms(system, dual_pieces, levels, indices)
    overlap = np.clip(
        np.minimum(p_hi[:, None], d_hi[None, :]) - np.maximum(p_lo[:, None], d_lo[None, :]), 0.0, None
    )
    products = overlap * p_val[:, None] * d_val.conj()[None, :]
    count = len(_detail_blocks(system, levels)) * len(indices)
    gram = np.zeros((count, count), dtype=complex)
    np.add.at(gram, (p_id[:, None], d_id[None, :]), products)
    return gram


def cross_biorthogonality(
    system: WaveletSystem,
    levels: Sequence[int] = (-1, 0, 1, 2),
    window: int = 4,
    omega: Optional[float] = None,
    step: Optional[float] = None,
) -> CrossBiorthogonality:
    """
    max |<psi_{l,j,lambda}, psi~_{l',j',sigma}> - delta| over a finite atom set.

    Closed-form time-domain generators give exact inner products. Otherwise
    the Gram matrix is a trapezoid sum on a frequency grid: the smallest grid
    holding the atoms when the generators are compactly supported and no grid
    is given, the given or default grid otherwise.
    """
    level_list = list(levels)
    indices = translation_window(_window(window))
    if system.time_pieces is not None:
        gram = _time_gram(system, level_list, indices)
        method, w, h = "time_closed_form", None, None
    else:
        if omega is None and step is None and system.support is not None:
            w, h = atom_grid(system, level_list, window)
        else:
            w, h = default_grid(system.spectrum, omega, step)
        if system.support is not None:
            reach = system.support * float(system.spectrum.dilation) ** max(level_list)
            if reach > w * (1 + _GUARD):
                raise InvalidGrid(
                    f"level {max(level_list)} atoms reach |xi| = {reach:g}, beyond omega = {w:g}",
                    omega=w, reach=reach,
                )
        grid = SampledFunction.grid_points(w, h)
        primal = _atom_matrix(system, level_list, indices, grid, dual=False)
        dual = _atom_matrix(system, level_list, indices, grid, dual=True)
        gram = _analyze(primal, dual, h)
        method = "frequency_quadrature"
    deviation = np.abs(gram - np.eye(gram.shape[0]))
    logger.debug("cross-scale Gram of %d atoms by %s", gram.shape[0], method)
    return CrossBiorthogonality(
        max_deviation=float(deviation.max()),
        diagonal_deviation=float(np.max(np.abs(np.diag(gram) - 1.0))),
        atom_count=int(gram.shape[0]),
        method=method,
        omega=w,
        step=h,
    )


def _signal_matrix(signals: Sequence[SampledFunction]) -> Tuple[np.ndarray, np.ndarray]:
    if not signals:
        raise ZeroSignal("no signals supplied")
    first = signals[0]
    for f in signals[1:]:
        if not first.same_grid(f):
            raise GridMismatch("signals live on different grids")
    norms = np.array([_require_signal(f) for f in signals])
    return np.vstack([f.samples for f in signals]), norms ** 2


def _block_energy(
    system: WaveletSystem,
    matrix: np.ndarray,
    grid: np.ndarray,
    step: float,
    window: Optional[int],
    dual: bool,
    block: Tuple[int, int],
) -> np.ndarray:
    """sum over lambda of |<f, atom>|^2 for one block of the chosen family."""
    if window is None:
        folded = _folded_part(matrix, grid, step, system, dual, dual, block)
        weights = _trapezoid_weights(grid.size, step)
        return np.real(np.sum(folded * matrix.conj() * weights[None, :], axis=1))
    atoms = _block(system, block[0], block[1], translation_window(_window(window)), grid, dual)
    return np.sum(np.abs(_analyze(matrix, atoms, step)) ** 2, axis=1)


def _frame_energy(
    system: WaveletSystem,
    matrix: np.ndarray,
    grid: np.ndarray,
    step: float,
    levels: Sequence[int],
    window: Optional[int],
    dual: bool,
) -> np.ndarray:
    energy = np.zeros(matrix.shape[0])
    blocks = _detail_blocks(system, levels)
    for part in _run_blocks(partial(_block_energy, system, matrix, grid, step, window, dual), blocks):
        energy += part
    return energy


def empirical_frame_bounds(
    system: WaveletSystem,
    signals: Sequence[SampledFunction],
    levels: Optional[Sequence[int]] = None,
    window: Optional[int] = None,
    dual: bool = False,
) -> FrameEstimate:
    """min and max of sum |<f, psi>|^2 / ||f||^2 over the signals; window None sums all of Lambda."""
    matrix, energy = _signal_matrix(signals)
    level_list = _levels(levels)
    size = None if window is None else _window(window)
    first = signals[0]
    ratios = _frame_energy(system, matrix, first.grid, first.step, level_list, size, dual) / energy
    return FrameEstimate(
        lower=float(ratios.min()),
        upper=float(ratios.max()),
        sample_count=len(signals),
        levels=level_list,
        window=size,
    )


def frame_chain(
    system: WaveletSystem,
    signals: Sequence[SampledFunction],
    levels: Optional[Sequence[int]] = None,
    window: Optional[int] = None,
) -> FrameChain:
    """
    Check |<u, f>|^2 / (B~ ||f||^2) <= sum |<f, psi>|^2 per signal, with B~ the
    measured dual upper bound and u = sum <f, psi> psi~ the part of f the
    level range reaches. When u = f this is ||f||^2 / B~ <= sum |<f, psi>|^2.
    """
    dual_upper = empirical_frame_bounds(system, signals, levels, window, dual=True).upper
    matrix, energy = _signal_matrix(signals)
    level_list = _levels(levels)
    size = None if window is None else _window(window)
    grid, step = signals[0].grid, signals[0].step
    coefficients = _frame_energy(system, matrix, grid, step, level_list, size, False)
    covered = _parts_sum(matrix, grid, step, system, _detail_blocks(system, level_list), size, True)
    weights = _trapezoid_weights(grid.size, step)
    reached = np.abs(np.sum(covered * matrix.conj() * weights[None, :], axis=1)) ** 2
    violation = (reached / (dual_upper * energy) - coefficients) / energy
    return FrameChain(max_violation=float(violation.max()), dual_upper=dual_upper)


def covered_band(s: Spectrum, j_lo: int, j_hi: int, omega: float) -> Tuple[float, float]:
    """
    Positive band reached by the details of levels j_lo..j_hi: above the
    dilate (2N)^j_lo Gamma and below (2N)^(j_hi+1) / 2, inside [1/4, omega/2].
    """
    D = float(s.dilation)
    lo = max(_SIGNAL_FLOOR, D ** j_lo * (s.N + 1) / 2)
    hi = min(omega / 2, D ** (j_hi + 1) / 2)
    if lo >= hi:
        raise InvalidInterval(f"levels [{j_lo}, {j_hi}] cover no band inside the grid", lo=lo, hi=hi)
    return lo, hi


def random_signal(band: Tuple[float, float], seed: int, omega: float, step: float) -> SampledFunction:
    """Smoothed complex Gaussian noise ramped to zero outside the band."""
    lo, hi = band
    if lo >= hi:
        raise InvalidInterval(f"empty band [{lo}, {hi}]", lo=lo, hi=hi)
    rng = np.random.default_rng(seed)
    grid = SampledFunction.grid_points(omega, step)
    noise = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
    width = max(1, int(round(_SMOOTHING / step)))
    kernel = np.bartlett(2 * width + 1)
    smooth = np.convolve(noise, kernel / kernel.sum(), mode="same")
    ramp = np.clip(np.minimum(grid - lo, hi - grid) / _SMOOTHING, 0.0, 1.0)
    return SampledFunction(omega=omega, step=step, samples=smooth * ramp)


def random_span_signal(
    system: WaveletSystem,
    seed: int,
    levels: Sequence[int] = (0,),
    window: int = 2,
    omega: Optional[float] = None,
    step: Optional[float] = None,
    dual: bool = False,
    channels: Optional[Sequence[int]] = None,
) -> SampledFunction:
    """Random combination of the atoms with the given levels, channels and |n| <= window."""
    w, h = default_grid(system.spectrum, omega, step)
    grid = SampledFunction.grid_points(w, h)
    indices = translation_window(_window(window))
    chosen = range(system.channels) if channels is None else channels
    rng = np.random.default_rng(seed)
    total = np.zeros(grid.size, dtype=complex)
    for level in levels:
        for channel in chosen:
            coeffs = rng.standard_normal(len(indices)) + 1j * rng.standard_normal(len(indices))
            total += coeffs @ _block(system, channel, level, indices, grid, dual)
    return SampledFunction(omega=w, step=h, samples=total)


def projection_decay(
    f: SampledFunction,
    system: WaveletSystem,
    levels: Sequence[int] = range(-6, 1),
    window: Optional[int] = None,
) -> List[Tuple[int, float]]:
    """(j, ||P_j f||) for each level, coarse to fine."""
    return [(j, project(f, system, j, window).norm()) for j in sorted(levels)]


def dilate(f: SampledFunction, s: Spectrum) -> SampledFunction:
    """Dilation by 2N in time: samples scaled by (2N)^(-1/2) on the grid dilated by 2N."""
    factor = s.dilation
    return SampledFunction(omega=f.omega * factor, step=f.step * factor, samples=f.samples * factor ** -0.5)


def coefficient_table(
    f: SampledFunction,
    system: WaveletSystem,
    levels: Optional[Sequence[int]] = None,
    window: Optional[int] = None,
    dual: bool = True,
) -> Dict[Tuple[int, int, TranslationIndex], complex]:
    """<f, atom> for every channel, level and translation, keyed by (channel, level, index)."""
    indices = translation_window(_window(window))
    blocks = [(channel, level) for level in _levels(levels) for channel in range(system.channels)]

    def run(block: Tuple[int, int]) -> np.ndarray:
        atoms = _block(system, block[0], block[1], indices, f.grid, dual)
        return _analyze(f.samples[None, :], atoms, f.step)[0]

    table: Dict[Tuple[int, int, TranslationIndex], complex] = {}
    for (channel, level), values in zip(blocks, _run_blocks(run, blocks)):
        for idx, value in zip(indices, values):
            table[(channel, level, idx)] = complex(value)
    return table
