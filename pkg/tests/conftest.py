import numpy as np
import pytest

from layered_defense.curves import identity_curve
from layered_defense.network import InnerSensor, OuterSensor, SensorNetwork


@pytest.fixture
def two_branch():
    """Two inner sensors, one outer each, identity curves and unit flows."""
    c = identity_curve()
    return SensorNetwork(
        (InnerSensor("i1", c), InnerSensor("i2", c)),
        (OuterSensor("j1", c), OuterSensor("j2", c)),
        {"i1": ("j1",), "i2": ("j2",)},
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


# acceptance criteria: label -> list of per-test outcomes
_criteria: dict[str, list[bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _criteria.setdefault(marker.args[0], []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        status = "PASS" if all(_criteria[label]) else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
