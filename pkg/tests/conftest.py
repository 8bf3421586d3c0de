import os

import numpy as np
import pytest

from resonpy.construction import build_B, build_D

from tests.constants import FIXTURE_ROOT, SEED


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run acceptance-scale tests marked slow",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale run, enabled with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def B4():
    return build_B(4)


@pytest.fixture
def D4(B4):
    return build_D(B4, 1e4)


@pytest.fixture
def B3():
    return build_B(3)


@pytest.fixture
def search_config_path():
    return os.path.join(FIXTURE_ROOT, "search_config.json")


@pytest.fixture
def capped_config_path():
    return os.path.join(FIXTURE_ROOT, "capped_construct_config.json")
