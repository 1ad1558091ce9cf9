import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


class AcceptanceLog:
    """Collects one pass/fail line per acceptance criterion."""

    def __init__(self):
        self.lines: dict[str, tuple[bool, str]] = {}

    def record(self, criterion: str, passed: bool, detail: str) -> None:
        self.lines[criterion] = (bool(passed), detail)


_LOG = AcceptanceLog()


@pytest.fixture(scope="session")
def acceptance():
    return _LOG


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260814)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _LOG.lines:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for criterion, (passed, detail) in _LOG.lines.items():
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {criterion}: {status} - {detail}")
