import os

import pytest
from hypothesis import HealthCheck, settings

from scld.code import Code

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def c1():
    return Code(2, 3, ((0, 0, 1), (1, 0, 1), (1, 1, 0)))


@pytest.fixture
def c2():
    return Code(2, 3, ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))


@pytest.fixture
def rep3():
    return Code(3, 2, ((0, 0), (1, 1), (2, 2)))


@pytest.fixture
def cube2():
    return Code(2, 2, ((0, 0), (0, 1), (1, 0), (1, 1)))


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """Record one acceptance line; the terminal summary prints them in order."""

    def _record(number: int, title: str, ok: bool, seconds: float, note: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        line = f"AC{number:02d} {status}  {title}  ({seconds:.2f} s)"
        ACCEPTANCE[number] = line + (f"  {note}" if note else "")

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
