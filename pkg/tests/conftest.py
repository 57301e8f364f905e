import numpy as np
import pytest

from randzeros.ensembles import EnsembleSpec, Family


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def su2_spec(N, seed=0, measure="GAUSSIAN"):
    return EnsembleSpec(Family.SU2_POLY, N, measure, seed)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
