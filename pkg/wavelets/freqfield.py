"""
Frequency Field - Sampled Functions and Periodization

Role: Frequency-domain numerics
Responsibility: Uniform-grid samples of Fourier transforms, trapezoid inner
products, Lambda-periodization sums, and the translate-system checks built
on them (biorthogonality, Riesz bounds, dual by normalization, span norms).

Grid convention: xi_i = (i - half) * step with half = (count - 1) / 2, so
xi = 0 is always a grid point and every Lambda shift is an integer index
shift once the step divides 1/(4N).
"""

import logging
import math
from typing import Callable, Dict, Mapping, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from utils.report_export import ConditionEntry
from wavelets.config import config
from wavelets.errors import (
    GridMismatch,
    InvalidGrid,
    InvalidWindow,
    LowerBoundZero,
    NumraError,
    StepNotAligned,
)
from wavelets.spectrum import (
    Spectrum,
    TranslationIndex,
    gamma_fourier,
    lambda_fraction,
    lambda_value,
    translation_window,
)

logger = logging.getLogger(__name__)

_ALIGN_SLACK = 1e-9
_ZERO = 1e-14


def _as_integer(value: float, what: str, error=InvalidGrid, **context) -> int:
    nearest = round(value)
    if abs(value - nearest) > _ALIGN_SLACK * max(1.0, abs(value)):
        raise error(f"{what} is not an integer ({value!r})", **context)
    return int(nearest)


class SampledFunction(BaseModel):
    """Samples of a Fourier transform on [-omega, omega]; zero outside."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega: float
    step: float
    samples: np.ndarray

    @field_validator("samples", mode="before")
    @classmethod
    def _to_complex(cls, value):
        array = np.array(value, dtype=complex).reshape(-1)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_grid(self) -> "SampledFunction":
        if self.omega <= 0 or self.step <= 0:
            raise InvalidGrid("omega and step must be positive", omega=self.omega, step=self.step)
        intervals = _as_integer(2 * self.omega / self.step, "2*omega/step", omega=self.omega, step=self.step)
        if intervals % 2:
            raise InvalidGrid("omega must be a multiple of step", omega=self.omega, step=self.step)
        if self.samples.size != intervals + 1:
            raise InvalidGrid(
                f"expected {intervals + 1} samples, got {self.samples.size}",
                omega=self.omega, step=self.step,
            )
        return self

    @classmethod
    def grid_points(cls, omega: float, step: float) -> np.ndarray:
        half = _as_integer(omega / step, "omega/step", omega=omega, step=step)
        return np.arange(-half, half + 1) * step

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], omega: float, step: float) -> "SampledFunction":
        return cls(omega=omega, step=step, samples=fn(cls.grid_points(omega, step)))

    @classmethod
    def zeros(cls, omega: float, step: float) -> "SampledFunction":
        count = 2 * _as_integer(omega / step, "omega/step", omega=omega, step=step) + 1
        return cls(omega=omega, step=step, samples=np.zeros(count))

    @property
    def count(self) -> int:
        return self.samples.size

    @property
    def half(self) -> int:
        return (self.count - 1) // 2

    @property
    def grid(self) -> np.ndarray:
        return np.arange(-self.half, self.half + 1) * self.step

    def same_grid(self, other: "SampledFunction") -> bool:
        return self.count == other.count and math.isclose(self.step, other.step, rel_tol=1e-12)

    def require_same_grid(self, other: "SampledFunction") -> None:
        if not self.same_grid(other):
            raise GridMismatch(
                "functions live on different grids",
                left={"omega": self.omega, "step": self.step},
                right={"omega": other.omega, "step": other.step},
            )

    def index_of(self, xi: float) -> int:
        """Grid index of xi; raises StepNotAligned when xi is not a grid point."""
        offset = _as_integer(xi / self.step, f"xi={xi} / step", error=StepNotAligned, xi=xi, step=self.step)
        return offset + self.half

    def value_at(self, xi: float) -> complex:
        index = self.index_of(xi)
        if 0 <= index < self.count:
            return complex(self.samples[index])
        return 0j

    def with_samples(self, samples: np.ndarray) -> "SampledFunction":
        return SampledFunction(omega=self.omega, step=self.step, samples=samples)

    def conj(self) -> "SampledFunction":
        return self.with_samples(self.samples.conj())

    def norm(self) -> float:
        return math.sqrt(max(inner_product(self, self).real, 0.0))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples))) if self.count else 0.0

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        self.require_same_grid(other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        self.require_same_grid(other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, scalar: complex) -> "SampledFunction":
        return self.with_samples(self.samples * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SampledFunction":
        return self.with_samples(-self.samples)


class PeriodizationProfile(BaseModel):
    """Truncated Lambda-periodization over one period [0, 2)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base_grid: np.ndarray
    values: np.ndarray
    truncation_n_max: int
    tail_bound: Optional[float]

    def deviation_from(self, target: complex) -> float:
        return float(np.max(np.abs(self.values - target)))


class RieszBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float

    @model_validator(mode="after")
    def _ordered(self) -> "RieszBounds":
        if not 0 <= self.lower <= self.upper:
            raise InvalidGrid("Riesz bounds must satisfy 0 <= A <= B", lower=self.lower, upper=self.upper)
        return self


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """Trapezoid rule for the integral of f * conj(g)."""
    f.require_same_grid(g)
    return complex(np.trapezoid(f.samples * g.samples.conj(), dx=f.step))


def default_n_max(omega: float) -> int:
    return math.ceil((omega + 2) / 2)


def shift_index(s: Spectrum, f: SampledFunction, idx: TranslationIndex) -> int:
    """Integer number of grid steps in the translation lambda(idx)."""
    return _as_integer(
        float(lambda_fraction(s, idx)) / f.step,
        f"lambda={lambda_value(s, idx)} / step",
        error=StepNotAligned, step=f.step, N=s.N, r=s.r,
    )


def check_alignment(s: Spectrum, f: SampledFunction) -> int:
    """Steps per period; raises StepNotAligned unless the step divides 1/(4N)."""
    _as_integer(1.0 / (4 * s.N * f.step), "1/(4N*step)", error=StepNotAligned, step=f.step, N=s.N)
    return _as_integer(2.0 / f.step, "2/step", error=StepNotAligned, step=f.step)


def _compactly_supported(f: SampledFunction) -> bool:
    outer = np.abs(f.grid) >= f.omega - 1.0
    return bool(np.all(np.abs(f.samples[outer]) <= _ZERO))


def _tail_bound(f: SampledFunction, g: SampledFunction) -> Optional[float]:
    if _compactly_supported(f) or _compactly_supported(g):
        return 0.0

    from wavelets.cascade import fit_decay

    try:
        fit_f, fit_g = fit_decay(f), fit_decay(g)
    except NumraError as exc:
        logger.warning("tail bound unavailable: %s", exc.message)
        return None
    p = 1.0 + fit_f.epsilon + fit_g.epsilon
    if p <= 1.0:
        return None
    edge = 1.0 + f.omega
    return fit_f.C * fit_g.C * (2.0 * edge ** (1.0 - p) / (p - 1.0) + 2.0 * edge ** (-p))


def _period_samples(s: Spectrum, f: SampledFunction, n_max: int) -> np.ndarray:
    """Matrix of f at (xi_p + lambda) for every lambda in the window, xi_p on [0, 2)."""
    period = check_alignment(s, f)
    p = np.arange(period)
    shifts = np.array([shift_index(s, f, idx) for idx in translation_window(n_max)])
    index = p[None, :] + f.half + shifts[:, None]
    inside = (index >= 0) & (index < f.count)
    values = np.zeros(index.shape, dtype=complex)
    values[inside] = f.samples[index[inside]]
    return values


def periodize(s: Spectrum, f: SampledFunction, g: SampledFunction, n_max: Optional[int] = None) -> PeriodizationProfile:
    """S(xi) = sum over lambda of f(xi + lambda) * conj(g(xi + lambda)) on [0, 2)."""
    f.require_same_grid(g)
    if n_max is None:
        n_max = default_n_max(f.omega)
    if n_max < 1:
        raise InvalidWindow(f"n_max must be >= 1, got {n_max}", n_max=n_max)

    values = np.sum(_period_samples(s, f, n_max) * _period_samples(s, g, n_max).conj(), axis=0)
    base_grid = np.arange(values.size) * f.step
    return PeriodizationProfile(
        base_grid=base_grid,
        values=values,
        truncation_n_max=n_max,
        tail_bound=_tail_bound(f, g),
    )


def check_biorthogonal(
    s: Spectrum,
    f: SampledFunction,
    g: SampledFunction,
    n_max: Optional[int] = None,
    tol: float = 1e-12,
    name: str = "biorthogonal_translates",
) -> ConditionEntry:
    profile = periodize(s, f, g, n_max)
    deviation = profile.deviation_from(1.0)
    if profile.tail_bound is None:
        tolerance, note = tol, "tail bound unavailable; no allowance applied"
    else:
        tolerance, note = tol + profile.tail_bound, None
    details = {"base_tolerance": tol, "tail_bound": profile.tail_bound}
    if note:
        details["note"] = note
    return ConditionEntry(
        name=name,
        anchor="periodization of the pair is identically 1",
        parameters={"n_max": profile.truncation_n_max, "step": f.step, "omega": f.omega},
        max_deviation=deviation,
        tolerance=tolerance,
        details=details,
    )


def check_orthogonal_cross(
    s: Spectrum,
    f: SampledFunction,
    g: SampledFunction,
    n_max: Optional[int] = None,
    tol: float = 1e-12,
    name: str = "mixed_periodization",
) -> ConditionEntry:
    """Mixed periodization must vanish identically."""
    profile = periodize(s, f, g, n_max)
    tail = profile.tail_bound or 0.0
    return ConditionEntry(
        name=name,
        anchor="mixed periodization of wavelet and dual scaling function is 0",
        parameters={"n_max": profile.truncation_n_max, "step": f.step, "omega": f.omega},
        max_deviation=profile.deviation_from(0.0),
        tolerance=tol + tail,
        details={"base_tolerance": tol, "tail_bound": profile.tail_bound},
    )


def riesz_bounds(s: Spectrum, f: SampledFunction, n_max: Optional[int] = None) -> RieszBounds:
    power = periodize(s, f, f, n_max).values.real
    return RieszBounds(lower=max(float(power.min()), 0.0), upper=max(float(power.max()), 0.0))


def dual_by_normalization(s: Spectrum, f: SampledFunction, n_max: Optional[int] = None) -> SampledFunction:
    """The dual generator f / S_f, with S_f read at xi mod 2."""
    power = periodize(s, f, f, n_max).values.real
    lower = float(power.min())
    if lower <= _ZERO:
        raise LowerBoundZero(f"lower Riesz bound is {lower:.3e}; normalization is unstable", lower=lower)
    offsets = np.arange(-f.half, f.half + 1) % power.size
    return f.with_samples(f.samples / power[offsets])


def trig_series(s: Spectrum, coeffs: Mapping[TranslationIndex, complex], xi: np.ndarray) -> np.ndarray:
    """h_hat(xi) = sum of h_lambda exp(-2 pi i lambda xi)."""
    xi = np.asarray(xi, dtype=float)
    total = np.zeros(xi.shape, dtype=complex)
    for idx, value in sorted(coeffs.items(), key=lambda item: item[0].sort_key()):
        total += complex(value) * np.exp(-2j * np.pi * lambda_value(s, idx) * xi)
    return total


def gamma_energy(s: Spectrum, coeffs: Mapping[TranslationIndex, complex]) -> float:
    """Closed-form integral of |h_hat|^2 over Gamma."""
    if not coeffs:
        return 0.0
    items = sorted(coeffs.items(), key=lambda item: item[0].sort_key())
    lam = [lambda_fraction(s, idx) for idx, _ in items]
    h = np.array([complex(value) for _, value in items])
    mu = np.array([[float(b - a) for b in lam] for a in lam])
    kernel = gamma_fourier(s, mu)
    return float(np.real(h @ kernel @ h.conj()))


def span_norm_sandwich(
    s: Spectrum,
    f: SampledFunction,
    coeffs: Mapping[TranslationIndex, complex],
    n_max: Optional[int] = None,
):
    """(A * int_Gamma |h|^2, ||sum h_lambda f(. - lambda)||^2, B * int_Gamma |h|^2)."""
    bounds = riesz_bounds(s, f, n_max)
    energy = gamma_energy(s, coeffs)
    combination = synthesize_translates(s, f, coeffs)
    middle = inner_product(combination, combination).real
    return bounds.lower * energy, middle, bounds.upper * energy


def translate_coefficients(
    s: Spectrum, f: SampledFunction, g: SampledFunction, window: int
) -> Dict[TranslationIndex, complex]:
    """<f, g(. - lambda)> for every translation with |n| <= window."""
    f.require_same_grid(g)
    xi = f.grid
    indices = translation_window(window)
    lam = np.array([lambda_value(s, idx) for idx in indices])
    phases = np.exp(2j * np.pi * np.outer(lam, xi))
    integrand = (f.samples * g.samples.conj())[None, :] * phases
    values = np.trapezoid(integrand, dx=f.step, axis=1)
    return {idx: complex(value) for idx, value in zip(indices, values)}


def synthesize_translates(
    s: Spectrum, g: SampledFunction, coeffs: Mapping[TranslationIndex, complex]
) -> SampledFunction:
    return g.with_samples(g.samples * trig_series(s, coeffs, g.grid))


def indicator(intervals, omega: float, step: float, scale: complex = 1.0) -> SampledFunction:
    """Sampled indicator of a union of half-open intervals [a, b)."""
    def fn(xi: np.ndarray) -> np.ndarray:
        out = np.zeros(xi.shape, dtype=complex)
        for a, b in intervals:
            lo = np.ceil(float(a) / step - _ALIGN_SLACK)
            hi = np.ceil(float(b) / step - _ALIGN_SLACK)
            units = np.round(xi / step)
            out[(units >= lo) & (units < hi)] = scale
        return out

    return SampledFunction.from_callable(fn, omega, step)


def default_grid(s: Spectrum, omega: Optional[float] = None, step: Optional[float] = None):
    return (float(config.omega if omega is None else omega),
            float(config.default_step(s.N) if step is None else step))
