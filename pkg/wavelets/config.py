"""
Toolkit Configuration - Defaults and Environment Settings

Holds the numeric defaults every report records, plus the environment
switches (thread cap, log level, run-log location).
"""

import os
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional


class Tolerance(str, Enum):
    """Tolerance classes used by the certification checks."""
    ALGEBRAIC = "algebraic"
    QUADRATURE = "quadrature"
    TRUNCATION = "truncation"
    FRAME = "frame"


class NumraConfig:
    """
    Central configuration for the certification pipeline.

    Environment variables:
    - NUMRA_THREADS: upper bound on worker threads for coefficient blocks
    - NUMRA_LOG_LEVEL: logging level name for the CLI handler
    - NUMRA_RUN_LOG: path of the JSON-lines run log
    - NUMRA_RUN_LOG_MAX: keep only this many newest runs (unset: keep all)

    Window-truncated estimates are judged against the truncation tolerance
    rather than the quadrature one; frame tightness uses the frame tolerance.
    """

    def __init__(self):
        """Initialize configuration from environment variables."""
        self.threads = self._get_threads()
        self.log_level = os.environ.get("NUMRA_LOG_LEVEL", "WARNING").upper()
        self.run_log_path = os.environ.get("NUMRA_RUN_LOG", "storage/run_log.jsonl")
        self.run_log_max_runs = self._get_int("NUMRA_RUN_LOG_MAX")

        self.omega = 8
        self.oversampling = 64
        self.lambda_window = 16
        self.j_lo = -2
        self.j_hi = 4
        self.cascade_depth = 30
        self.seed = 0
        self.signal_count = 20
        self.epsilon_cap = 10.0

        self.tolerances = {
            Tolerance.ALGEBRAIC: 1e-12,
            Tolerance.QUADRATURE: 1e-6,
            Tolerance.TRUNCATION: 5e-2,
            Tolerance.FRAME: 1e-2,
        }

    def _get_int(self, name: str) -> Optional[int]:
        raw = os.environ.get(name, "")
        try:
            value = int(raw)
        except ValueError:
            return None
        return value if value >= 1 else None

    def _get_threads(self) -> int:
        """Read NUMRA_THREADS, falling back to the CPU count."""
        raw = os.environ.get("NUMRA_THREADS", "")
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value < 1:
            value = os.cpu_count() or 1
        return value

    def default_step(self, N: int) -> Fraction:
        """Grid step 1/(4N * oversampling); divides 1/(4N) as periodization requires."""
        return Fraction(1, 4 * N * self.oversampling)

    def tolerance(self, kind: Tolerance) -> float:
        return self.tolerances[Tolerance(kind)]

    def get_status(self, N: Optional[int] = None) -> Dict[str, Any]:
        """Get current configuration status."""
        status = {
            "threads": self.threads,
            "log_level": self.log_level,
            "run_log_path": self.run_log_path,
            "run_log_max_runs": self.run_log_max_runs,
            "defaults": {
                "omega": self.omega,
                "lambda_window": self.lambda_window,
                "j_range": [self.j_lo, self.j_hi],
                "cascade_depth": self.cascade_depth,
                "seed": self.seed,
                "epsilon_cap": self.epsilon_cap,
            },
            "tolerances": {kind.value: value for kind, value in self.tolerances.items()},
        }
        if N is not None:
            status["defaults"]["step"] = float(self.default_step(N))
        return status


config = NumraConfig()
