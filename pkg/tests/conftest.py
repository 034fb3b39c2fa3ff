import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bentforge.finite_field import default_field, named_field

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def gf64():
    return named_field("gf2_6")


@pytest.fixture(scope="session")
def gf81():
    return named_field("gf3_4")


@pytest.fixture(scope="session")
def gf27():
    return named_field("gf3_3")


@pytest.fixture(scope="session")
def gf125():
    return default_field(5, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance summary: one PASS/FAIL line per criterion ---------------------

_CRITERIA: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion n")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _CRITERIA.setdefault(mark.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        verdict = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({sum(results)}/{len(results)} tests passed)")
