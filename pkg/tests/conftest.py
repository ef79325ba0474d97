import time

import pytest

from bergman_asymptotics.bergman import build_basis, zeros_of_p
from bergman_asymptotics.conformal import exterior_map
from bergman_asymptotics.domains import PRESETS

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class Timed:
    def __init__(self, value, seconds):
        self.value = value
        self.seconds = seconds


_BASES = {}


def preset_basis(name, N=60):
    """Default-policy basis (verified at doubled precision), built once per session."""
    key = (name, N)
    if key not in _BASES:
        t0 = time.perf_counter()
        basis = build_basis(PRESETS[name], N)
        _BASES[key] = Timed(basis, time.perf_counter() - t0)
    return _BASES[key]


@pytest.fixture(scope="session")
def semidisk60():
    return preset_basis("semidisk").value


@pytest.fixture(scope="session")
def semidisk_map(semidisk60):
    return exterior_map(PRESETS["semidisk"], semidisk60.ctx)


@pytest.fixture(scope="session")
def ellipse60():
    return preset_basis("ellipse").value


@pytest.fixture(scope="session")
def ellipse_map(ellipse60):
    return exterior_map(PRESETS["ellipse"], ellipse60.ctx)


@pytest.fixture(scope="session")
def disk60():
    return preset_basis("disk").value


@pytest.fixture(scope="session")
def square60():
    return preset_basis("square").value


@pytest.fixture(scope="session")
def semidisk_zeros(semidisk60):
    return {n: zeros_of_p(semidisk60, n) for n in range(1, 61)}
