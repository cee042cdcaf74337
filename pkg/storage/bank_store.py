"""
Bank Store - Filter-Bank and Sampled-Function Files

Reads and writes the JSON file formats: filter banks (trig-polynomial or
sampled masks) and sampled Fourier transforms with their provenance.
Numbers may be JSON numbers or exact strings such as "0.5" or "1/3".
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from wavelets.errors import BankFileError
from wavelets.filterbank import FilterBank, PeriodicFunction, SampledPeriodic, TrigPoly
from wavelets.freqfield import SampledFunction
from wavelets.spectrum import Spectrum

logger = logging.getLogger(__name__)


def parse_number(value: Any) -> float:
    """JSON number or exact decimal/fraction string to float."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a number: {value!r}") from exc
    raise ValueError(f"not a number: {value!r}")


def _parse_pairs(value: Any) -> List[Tuple[float, float]]:
    if not isinstance(value, (list, tuple)):
        raise ValueError("samples must be a list of [re, im] pairs")
    pairs = []
    for item in value:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ValueError(f"sample must be [re, im], got {item!r}")
        pairs.append((parse_number(item[0]), parse_number(item[1])))
    return pairs


class _SpectrumRecord(BaseModel):
    N: int
    r: int


class _CoeffRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: int
    n: int
    re: float = 0.0
    im: float = 0.0

    @field_validator("re", "im", mode="before")
    @classmethod
    def _number(cls, value):
        return parse_number(value)


class _TrigPolyRecord(BaseModel):
    type: Literal["trigpoly"]
    coeffs: List[_CoeffRecord]


class _SampledRecord(BaseModel):
    type: Literal["sampled"]
    period: float
    step: float
    samples: List[Tuple[float, float]]
    piecewise_constant: bool = False

    @field_validator("period", "step", mode="before")
    @classmethod
    def _number(cls, value):
        return parse_number(value)

    @field_validator("samples", mode="before")
    @classmethod
    def _pairs(cls, value):
        return _parse_pairs(value)


_MaskRecord = Annotated[Union[_TrigPolyRecord, _SampledRecord], Field(discriminator="type")]


class _BankRecord(BaseModel):
    spectrum: _SpectrumRecord
    synthesis: List[_MaskRecord]
    analysis: Optional[List[_MaskRecord]] = None


class _SampledFunctionRecord(BaseModel):
    omega: float
    step: float
    samples: List[Tuple[float, float]]
    provenance: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("omega", "step", mode="before")
    @classmethod
    def _number(cls, value):
        return parse_number(value)

    @field_validator("samples", mode="before")
    @classmethod
    def _pairs(cls, value):
        return _parse_pairs(value)


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BankFileError(f"cannot read {path}: {exc}", path=str(path)) from exc
    if not text.strip():
        raise BankFileError(f"{path} is empty", path=str(path))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BankFileError(f"{path} is not valid JSON: {exc}", path=str(path)) from exc


def _write_json(payload: Dict[str, Any], path: str) -> str:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(payload, indent=2) + "\n")
    except OSError as exc:
        raise BankFileError(f"cannot write {path}: {exc}", path=str(path)) from exc
    return str(target)


def _build_mask(record: Union[_TrigPolyRecord, _SampledRecord], spectrum: Spectrum) -> PeriodicFunction:
    if isinstance(record, _TrigPolyRecord):
        coeffs: Dict[Tuple[int, int], complex] = {}
        for term in record.coeffs:
            coeffs[(term.k, term.n)] = coeffs.get((term.k, term.n), 0j) + complex(term.re, term.im)
        return TrigPoly(spectrum=spectrum, coeffs=coeffs)
    return SampledPeriodic(
        period=record.period,
        step=record.step,
        samples=[complex(re, im) for re, im in record.samples],
        piecewise_constant=record.piecewise_constant,
    )


def load_bank(path: str) -> FilterBank:
    """Load a bank file; a missing analysis side means the bank is self-dual."""
    data = _read_json(path)
    try:
        record = _BankRecord.model_validate(data)
    except ValidationError as exc:
        raise BankFileError(
            f"{path} is not a filter-bank file: {exc.error_count()} validation error(s)",
            path=str(path), errors=[error["msg"] for error in exc.errors()],
        ) from exc

    spectrum = Spectrum(N=record.spectrum.N, r=record.spectrum.r)
    synthesis = [_build_mask(mask, spectrum) for mask in record.synthesis]
    if record.analysis is None:
        analysis = synthesis
    else:
        analysis = [_build_mask(mask, spectrum) for mask in record.analysis]
    bank = FilterBank(spectrum=spectrum, analysis=analysis, synthesis=synthesis)
    logger.info("loaded %d-channel bank from %s", bank.channels, path)
    return bank


def bank_to_dict(bank: FilterBank) -> Dict[str, Any]:
    return {
        "spectrum": bank.spectrum.to_dict(),
        "synthesis": [mask.to_dict() for mask in bank.synthesis],
        "analysis": [mask.to_dict() for mask in bank.analysis],
    }


def save_bank(bank: FilterBank, path: str) -> str:
    return _write_json(bank_to_dict(bank), path)


def save_sampled(f: SampledFunction, path: str, provenance: Optional[Dict[str, Any]] = None) -> str:
    payload = {
        "omega": f.omega,
        "step": f.step,
        "samples": [[value.real, value.imag] for value in f.samples],
        "provenance": provenance or {},
    }
    return _write_json(payload, path)


def load_sampled(path: str) -> Tuple[SampledFunction, Dict[str, Any]]:
    data = _read_json(path)
    try:
        record = _SampledFunctionRecord.model_validate(data)
    except ValidationError as exc:
        raise BankFileError(
            f"{path} is not a sampled-function file", path=str(path),
            errors=[error["msg"] for error in exc.errors()],
        ) from exc
    f = SampledFunction(
        omega=record.omega, step=record.step, samples=[complex(re, im) for re, im in record.samples]
    )
    return f, record.provenance
