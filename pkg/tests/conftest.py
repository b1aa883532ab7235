import numpy as np
import pytest

from sparse_isp.config import default_experiment
from sparse_isp.model import MultipolarSource, SourceComponent, build_lattice
from sparse_isp.pipeline import reference_image

A, N, EPS = 12.0, 20, 1e-3


def four_pole_source() -> MultipolarSource:
    return MultipolarSource((
        SourceComponent.monopole(5, 4, 9),
        SourceComponent.monopole(-4, -4, 8),
        SourceComponent.dipole(-4, 5, 1, -1),
        SourceComponent.dipole(4, -4, -1, 1),
    ))


def wrapped_exponentials(M, freqs, amps):
    m = np.arange(M)
    return sum(c * np.exp(2j * np.pi * f * m / M) for f, c in zip(freqs, amps))


@pytest.fixture(scope="session")
def source():
    return four_pole_source()


@pytest.fixture(scope="session")
def lattice():
    return build_lattice(A, N, EPS)


@pytest.fixture(scope="session")
def small_lattice():
    return build_lattice(A, 3, EPS)


@pytest.fixture(scope="session")
def experiment():
    return default_experiment()


@pytest.fixture(scope="session")
def reference(experiment):
    return reference_image(experiment)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
        terminalreporter.write_line(line)
