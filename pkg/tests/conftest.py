from pathlib import Path

import numpy as np
import pytest

from stabilizer_nonlocality import StabilizerGroup

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FIVE_QUBIT = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def five_qubit() -> StabilizerGroup:
    return StabilizerGroup.from_texts(FIVE_QUBIT)


@pytest.fixture
def bell() -> StabilizerGroup:
    return StabilizerGroup.from_texts(["XX", "ZZ"])


@pytest.fixture
def ghz3() -> StabilizerGroup:
    return StabilizerGroup.from_texts(["XXX", "ZZI", "IZZ"])


@pytest.fixture
def product_pair() -> StabilizerGroup:
    return StabilizerGroup.from_texts(["XI", "IX"])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def gme_without_witnesses() -> StabilizerGroup:
    return StabilizerGroup.from_texts(["-XIIZZY", "-XIYXZX", "-ZYIXZY", "-XXXIXX"])
