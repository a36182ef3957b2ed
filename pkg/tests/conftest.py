import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_CRITERIA = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion_log(request):
    """Append a check's one-line verdict to the end-of-run summary."""
    log = request.config.stash[_CRITERIA]

    def record(res):
        print(res.line())
        log.append(res.line())
        return res

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
