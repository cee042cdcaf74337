"""Shared fixtures: the Haar and Shannon systems on small grids."""

from fractions import Fraction
from pathlib import Path

import pytest

from wavelets.config import config
from wavelets.filterbank import haar_bank, shannon_bank
from wavelets.spectrum import Spectrum
from wavelets.transform import build_system, shannon_system

REPO_ROOT = Path(__file__).resolve().parent.parent
BANKS_DIR = REPO_ROOT / "banks"


@pytest.fixture(autouse=True)
def isolated_run_log(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "run_log_path", str(tmp_path / "run_log.jsonl"))
    monkeypatch.setattr(config, "threads", 2)


@pytest.fixture
def spectrum_n2():
    return Spectrum(N=2, r=1)


@pytest.fixture
def spectrum_n1():
    return Spectrum(N=1, r=1)


@pytest.fixture
def haar():
    return haar_bank()


@pytest.fixture(scope="session")
def haar_system():
    return build_system(haar_bank(), J=30)


@pytest.fixture(scope="session")
def shannon_n2():
    """(bank, phi, phi_dual) for N = 2, r = 1 on the default grid."""
    return shannon_bank(Spectrum(N=2, r=1))


@pytest.fixture(scope="session")
def shannon_system_n2():
    return shannon_system(Spectrum(N=2, r=1))


@pytest.fixture
def grid_n2():
    """Default grid for N = 2: omega 8, step 1/512."""
    return float(config.omega), float(Fraction(1, 512))
