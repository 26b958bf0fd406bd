import os

import hypothesis
import numpy as np
import pytest

from src.config_default import Config
from src.corpus import WORKED_CYCLES, fixture
from src.hamq_search import parse_cycle

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture
def config():
    cfg = Config()
    cfg.LOG_TO_TERMINAL = False
    return cfg


@pytest.fixture(scope="session")
def cube():
    return fixture('cube')


@pytest.fixture(scope="session")
def octahedron():
    return fixture('octahedron')


@pytest.fixture(scope="session")
def pyramid():
    return fixture('square_pyramid_octa_half')


@pytest.fixture(scope="session")
def cube_cycle(cube):
    return parse_cycle(cube, WORKED_CYCLES['cube'])


@pytest.fixture(scope="session")
def octahedron_cycle(octahedron):
    return parse_cycle(octahedron, WORKED_CYCLES['octahedron'])


@pytest.fixture(scope="session")
def pyramid_cycle(pyramid):
    return parse_cycle(pyramid, WORKED_CYCLES['square_pyramid_octa_half'])
