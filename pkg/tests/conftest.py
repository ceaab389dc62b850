import numpy as np
import pytest

from hstbeam._backend import available_backends
from hstbeam.config import ScenarioConfig, dbm_to_watts
from hstbeam.phased_array import ArrayModel

BACKENDS = available_backends()


@pytest.fixture(scope="session")
def array32():
    return ArrayModel(32)


@pytest.fixture(scope="session")
def ref_config():
    # 360 km/h, h = 50 m, N = 32, 25 m carriages, alpha = 3, 30 dBm
    return ScenarioConfig()


@pytest.fixture(scope="session")
def ref_config_40dbm(ref_config):
    return ref_config.replace(total_power=dbm_to_watts(40.0))


@pytest.fixture(params=sorted(BACKENDS))
def kernels(request, monkeypatch):
    """Route the package through one kernel backend for the test."""
    from hstbeam import _backend

    module = BACKENDS[request.param]
    monkeypatch.setattr(_backend, "kernels", module)
    return module


@pytest.fixture
def rng():
    return np.random.default_rng(20170604)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
