"""
Cascade - Scaling Functions and Wavelets from Masks

Role: Frequency-side construction
Responsibility: Infinite-product scaling functions, wavelets obtained from
the remaining masks, decay fits used for tail bounds, and the provenance
recorded with every cascade output.
"""

import hashlib
import json
import logging
import math
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from wavelets.config import config
from wavelets.errors import (
    DegenerateTail,
    InvalidGrid,
    InvalidWindow,
    NotNormalized,
    StepNotAligned,
    UnalignedQuery,
)
from wavelets.filterbank import PeriodicFunction
from wavelets.freqfield import SampledFunction, default_grid
from wavelets.spectrum import Spectrum

logger = logging.getLogger(__name__)

_NORMALIZATION_TOL = 1e-12
_ZERO = 1e-14
_MIN_FIT_OMEGA = 8.0


class DecayFit(BaseModel):
    """|f(xi)| <= C (1 + |xi|)^(-1/2 - epsilon) on the sampled grid."""

    model_config = ConfigDict(frozen=True)

    C: float
    epsilon: float
    passed: bool
    compact: bool = False


class OriginCheck(NamedTuple):
    value_at_zero: float
    ratio: float
    passed: bool


def check_normalized(m0: PeriodicFunction) -> complex:
    value = complex(m0.evaluate(0.0))
    if abs(value - 1.0) > _NORMALIZATION_TOL:
        raise NotNormalized(f"lowpass mask has m0(0) = {value}, expected 1", m0_at_zero=[value.real, value.imag])
    return value


def cascade_values(m0: PeriodicFunction, s: Spectrum, J: int, xi) -> np.ndarray:
    """Truncated product of m0(xi / (2N)^j) for j = 1..J at arbitrary points."""
    if J < 1:
        raise InvalidWindow(f"cascade depth must be >= 1, got {J}", J=J)
    x = np.asarray(xi, dtype=float)
    product = np.ones(x.shape, dtype=complex)
    scale = 1.0
    for _ in range(J):
        scale *= s.dilation
        product *= m0.evaluate(x / scale)
    return product


def cascade_scaling(
    m0: PeriodicFunction,
    s: Spectrum,
    J: Optional[int] = None,
    omega: Optional[float] = None,
    step: Optional[float] = None,
) -> SampledFunction:
    depth = config.cascade_depth if J is None else J
    check_normalized(m0)
    w, h = default_grid(s, omega, step)
    grid = SampledFunction.grid_points(w, h)
    try:
        values = cascade_values(m0, s, depth, grid)
    except UnalignedQuery as exc:
        raise StepNotAligned(
            f"mask samples are not closed under {depth} divisions by 2N: {exc.message}",
            J=depth, step=h, N=s.N,
        ) from exc
    logger.debug("cascade with J=%d on %d points", depth, grid.size)
    return SampledFunction(omega=w, step=h, samples=values)


def wavelet_from_masks(m: PeriodicFunction, phi: SampledFunction, s: Spectrum) -> SampledFunction:
    """psi(xi) = m(xi/2N) phi(xi/2N), sampled on the grid dilated by 2N."""
    values = np.asarray(m.evaluate(phi.grid), dtype=complex) * phi.samples
    return SampledFunction(omega=phi.omega * s.dilation, step=phi.step * s.dilation, samples=values)


def fit_decay(f: SampledFunction, cap: Optional[float] = None) -> DecayFit:
    """
    Fit |f| against (1 + |xi|)^(-1/2 - epsilon) on |xi| >= 1.

    The slope comes from least squares on the log of the per-unit-interval
    maxima (the envelope), skipping intervals where f vanishes. C is then the
    smallest constant making the bound hold at every grid point.
    """
    limit = config.epsilon_cap if cap is None else cap
    if f.omega < _MIN_FIT_OMEGA:
        raise InvalidGrid(f"decay fit needs omega >= {_MIN_FIT_OMEGA}, got {f.omega}", omega=f.omega)

    xi = np.abs(f.grid)
    magnitude = np.abs(f.samples)
    tail = xi >= 1.0
    if np.all(magnitude[tail] <= _ZERO):
        raise DegenerateTail("transform vanishes on |xi| >= 1; nothing to fit", omega=f.omega)

    compact = bool(np.all(magnitude[xi >= f.omega / 2] <= _ZERO))
    if compact:
        epsilon = limit
    else:
        bins = np.floor(xi[tail]).astype(np.int64)
        envelope = np.zeros(bins.max() + 1)
        np.maximum.at(envelope, bins, magnitude[tail])
        occupied = np.nonzero(envelope > _ZERO)[0]
        occupied = occupied[occupied >= 1]
        if occupied.size < 2:
            epsilon = limit
        else:
            slope = np.polyfit(np.log1p(occupied.astype(float)), np.log(envelope[occupied]), 1)[0]
            epsilon = min(float(-slope - 0.5), limit)

    weight = (1.0 + xi) ** (0.5 + epsilon)
    C = float(np.max(magnitude * weight))
    holds = bool(np.all(magnitude <= C * (1.0 + 1e-12) / weight + _ZERO))
    return DecayFit(C=C, epsilon=epsilon, passed=bool(epsilon > 0 and holds), compact=compact)


def wavelet_origin_check(psi: SampledFunction, tol: float = 1e-12) -> OriginCheck:
    """|psi(0)|, and max |psi(xi)| / |xi| over 0 < |xi| <= 1 (finite near the origin)."""
    at_zero = abs(psi.value_at(0.0))
    xi = psi.grid
    near = (xi != 0) & (np.abs(xi) <= 1.0)
    ratio = float(np.max(np.abs(psi.samples[near]) / np.abs(xi[near]))) if np.any(near) else 0.0
    return OriginCheck(at_zero, ratio, bool(at_zero <= tol and math.isfinite(ratio)))


def cascade_increments(
    m0: PeriodicFunction,
    s: Spectrum,
    J_max: int = 12,
    omega: Optional[float] = None,
    step: Optional[float] = None,
) -> List[float]:
    """max |Pi_{J+1} - Pi_J| over the grid for J = 1..J_max."""
    if J_max < 1:
        raise InvalidWindow(f"J_max must be >= 1, got {J_max}", J=J_max)
    check_normalized(m0)
    w, h = default_grid(s, omega, step)
    grid = SampledFunction.grid_points(w, h)
    product = cascade_values(m0, s, 1, grid)
    scale = float(s.dilation)
    increments = []
    for _ in range(J_max):
        scale *= s.dilation
        factor = np.asarray(m0.evaluate(grid / scale), dtype=complex)
        increments.append(float(np.max(np.abs(product * (factor - 1.0)))))
        product = product * factor
    return increments


def mask_hash(m: PeriodicFunction) -> str:
    """sha256 of the canonical JSON form of a mask."""
    canonical = json.dumps(m.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def cascade_provenance(m0: PeriodicFunction, J: int, f: SampledFunction) -> Dict[str, Any]:
    return {
        "mask_hash": mask_hash(m0),
        "J": J,
        "grid": {"omega": f.omega, "step": f.step, "count": f.count},
    }
