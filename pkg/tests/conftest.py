from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"

if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from fermatfe.elliptic import equianharmonic_lattice  # noqa: E402


@pytest.fixture(scope="session")
def lattice():
    return equianharmonic_lattice()


@pytest.fixture(scope="session")
def omega(lattice) -> float:
    return abs(lattice.omega1)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=20240611))
