"""Global test configuration and fixtures."""

import random
import shutil
import tempfile
from pathlib import Path
from typing import Generator

import pytest

from ballotgames.models.core import DEFAULT_CI_SECURITY_PARAMETER, CandidateSet, KeyPair
from ballotgames.models.crypto import ElGamalKeyPair, GroupParams
from ballotgames.services.election import DummyScheme
from ballotgames.services.helios import HeliosScheme

# p = 2q + 1 with q = 11; 4 = 2^2 generates the order-11 subgroup.
SMALL_GROUP = GroupParams(p=23, q=11, g=4)
SMALL_SECRET = 3


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for testing."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1234)


@pytest.fixture
def k() -> int:
    return DEFAULT_CI_SECURITY_PARAMETER


@pytest.fixture
def small_group() -> GroupParams:
    return SMALL_GROUP


@pytest.fixture
def small_keys() -> ElGamalKeyPair:
    """x = 3, h = 4^3 mod 23 = 18."""
    return ElGamalKeyPair(params=SMALL_GROUP, x=SMALL_SECRET, h=pow(SMALL_GROUP.g, SMALL_SECRET, SMALL_GROUP.p))


@pytest.fixture
def two_candidates() -> CandidateSet:
    return CandidateSet(candidates=("Labour", "Conservative"))


@pytest.fixture
def three_candidates() -> CandidateSet:
    return CandidateSet.numbered(3)


@pytest.fixture
def dummy_scheme(three_candidates) -> DummyScheme:
    return DummyScheme(three_candidates)


@pytest.fixture
def helios_scheme(three_candidates) -> HeliosScheme:
    return HeliosScheme(three_candidates)


@pytest.fixture
def hardened_scheme(three_candidates) -> HeliosScheme:
    return HeliosScheme(three_candidates, strict=True)


@pytest.fixture(scope="session")
def helios_keys() -> KeyPair:
    """A 32-bit key pair shared by the Helios tests; both variants accept it."""
    return HeliosScheme(CandidateSet.numbered(3)).setup(DEFAULT_CI_SECURITY_PARAMETER, random.Random(7))


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers based on file location."""
    for item in items:
        if "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
        elif "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)
