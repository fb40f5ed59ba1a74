import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from utils.config import DEFAULT_SEED  # noqa: E402
from utils.morse_algebra import MorseDescriptor  # noqa: E402

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def pytest_addoption(parser):
    parser.addoption(
        "--property-seed",
        type=int,
        default=DEFAULT_SEED,
        help="Seed for numpy-driven property sweeps.",
    )


@pytest.fixture
def property_seed(request) -> int:
    return request.config.getoption("--property-seed")


@pytest.fixture
def rng(property_seed) -> np.random.Generator:
    return np.random.default_rng(property_seed)


@pytest.fixture
def worked_f() -> MorseDescriptor:
    """(1, 1, 2) on a surface: phi_2 = 1."""
    return MorseDescriptor.build([1, 1, 2], terms=[("S2", 1)])


@pytest.fixture
def worked_f_prime() -> MorseDescriptor:
    """(1, 1) on a circle."""
    return MorseDescriptor.build([1, 1], terms=[("S1", 1)])


@pytest.fixture
def symmetric_f() -> MorseDescriptor:
    """(1, 0, 1): the height function on S^2, phi_2 = 0."""
    return MorseDescriptor.build([1, 0, 1], terms=[("S2", 1)])


@pytest.fixture
def data_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "data"
