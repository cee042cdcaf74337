"""
Plot Data Utility

Writes the numerical curves behind a certification as CSV, ready for any
plotting tool: periodization profiles, scaling functions, wavelets and
coefficient tables.
"""

import csv
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from wavelets.errors import BankFileError
from wavelets.spectrum import TranslationIndex

logger = logging.getLogger(__name__)


class PlotDataExporter:
    """
    CSV export of frequency-domain curves.

    Rows are written in a fixed order (channel, then grid or translation
    order) so repeated exports of the same run are byte-identical.
    """

    def __init__(self, output_dir: str = "exports"):
        self.output_dir = output_dir

    def _target(self, name: str, output_path: Optional[str]) -> Path:
        if not output_path:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            output_path = f"{self.output_dir}/{name}_{timestamp}.csv"
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _write(self, path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        try:
            with path.open("w", newline="") as handle:
                writer = csv.writer(handle)
                writer.writerow(header)
                writer.writerows(rows)
        except OSError as exc:
            raise BankFileError(f"cannot write {path}: {exc}", path=str(path)) from exc
        logger.info("wrote %s", path)
        return str(path)

    def write_curve(self, xi: np.ndarray, values: np.ndarray, output_path: Optional[str] = None,
                    name: str = "curve") -> str:
        """Columns xi, re, im."""
        path = self._target(name, output_path)
        rows = ((repr(float(x)), repr(float(v.real)), repr(float(v.imag)))
                for x, v in zip(np.asarray(xi), np.asarray(values, dtype=complex)))
        return self._write(path, ("xi", "re", "im"), rows)

    def write_channels(self, xi: np.ndarray, channels: Sequence[np.ndarray],
                       output_path: Optional[str] = None, first_channel: int = 1) -> str:
        """Columns channel, xi, re, im; one block per channel."""
        path = self._target("wavelets", output_path)

        def rows():
            for offset, values in enumerate(channels):
                for x, v in zip(np.asarray(xi), np.asarray(values, dtype=complex)):
                    yield (first_channel + offset, repr(float(x)), repr(float(v.real)), repr(float(v.imag)))

        return self._write(path, ("channel", "xi", "re", "im"), rows())

    def write_coefficients(
        self,
        coefficients: Dict[Tuple[int, int, TranslationIndex], complex],
        output_path: Optional[str] = None,
    ) -> str:
        """Columns channel, level, k, n, re, im, sorted by (channel, level, k, n)."""
        path = self._target("coefficients", output_path)
        ordered = sorted(coefficients.items(), key=lambda item: (item[0][0], item[0][1], item[0][2].sort_key()))
        rows = ((channel, level, idx.k, idx.n, repr(value.real), repr(value.imag))
                for (channel, level, idx), value in ordered)
        return self._write(path, ("channel", "level", "k", "n", "re", "im"), rows)
