import numpy as np
import pytest
from hypothesis import settings

from mchist.phase import SpectralPoint, circle_norming_constant, expand_spectrum
from mchist.scattering import InitialProfile, reflection_grid
from mchist.soliton import SolitonData

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def gaussian():
    return InitialProfile.gaussian(0.5, 1.0)


@pytest.fixture(scope="session")
def gaussian_data(gaussian):
    return reflection_grid(gaussian)


@pytest.fixture(scope="session")
def smooth_pair():
    """On-circle pair at angle 5 pi/6 with the real-valued constant phase."""
    w = np.exp(5j * np.pi / 6)
    c = circle_norming_constant(w)
    return SolitonData([w, -np.conj(w)], [c, np.conj(c)])


@pytest.fixture
def record():
    def _rec(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
