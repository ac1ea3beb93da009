from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from ivbounds.model import OutcomeSupport, new_observed_law

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

# Worked n=2 example, gamma = (0, 1), flat arm-major order
# p00,0 p10,0 p01,0 p11,0 p00,1 p10,1 p01,1 p11,1
WORKED_SIGNATURES = [
    (1, 1, 0, 1, 1, 1, 1, 0),
    (1, 1, 1, 0, 1, 1, 0, 1),
    (0, 1, 1, 0, 1, 1, 1, 1),
    (1, 1, 1, 0, 0, 1, 1, 1),
    (0, 1, 1, 1, 1, 1, 1, 0),
    (1, 1, 1, 1, 0, 1, 1, 0),
    (0, 1, 1, 1, 1, 0, 1, 1),
    (1, 0, 1, 1, 0, 1, 1, 1),
]
WORKED_VERTICES = [
    (0, -1, -1, 1, 0, -1, 0, -1),
    (0, -1, 0, -1, 0, -1, -1, 1),
    (-1, -1, -1, -1, 1, 0, 0, 1),
    (0, -1, -1, -1, 0, 0, 0, 1),
    (-1, -1, -1, 0, 1, 0, 0, 0),
    (0, -1, -1, 0, 0, 0, 0, 0),
    (-1, 0, -1, 0, 1, -1, -1, 0),
    (1, -1, -1, 0, -1, 0, -1, 0),
]
# nontrivial rays (families IV, V, V, VI)
WORKED_RAYS = [
    (0, 0, 1, 0, -1, -1, -1, 0),
    (-1, 0, -1, -1, 1, 0, 0, 0),
    (0, -1, -1, -1, 0, 1, 0, 0),
    (-1, -1, -1, 0, 0, 0, 1, 0),
]
PEARL_INEQUALITIES = {
    "p_{01,0} + p_{11,1} <= 1",
    "p_{10,0} + p_{00,1} <= 1",
    "p_{00,0} + p_{10,1} <= 1",
    "p_{11,0} + p_{01,1} <= 1",
}

_ACCEPTANCE = {}


@pytest.fixture
def binary():
    return OutcomeSupport.range(2)


@pytest.fixture
def degenerate_law():
    # all mass on (Y=0, D=0) in both arms
    return new_observed_law(OutcomeSupport.range(2), 2, [[[1, 1], [0, 0]], [[0, 0], [0, 0]]])


@pytest.fixture
def uniform_law():
    q = Fraction(1, 4)
    return new_observed_law(OutcomeSupport.range(2), 2, [[[q, q], [q, q]], [[q, q], [q, q]]])


@pytest.fixture
def violating_law():
    # p_{01,0} = 1 on arm 0 and p_{11,1} = 1 on arm 1
    return new_observed_law(OutcomeSupport.range(2), 2, [[[0, 0], [1, 0]], [[0, 0], [0, 1]]])


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        passed = rep.passed and not getattr(rep, "wasxfail", False)
        prev = _ACCEPTANCE.get(number, (title, True))
        _ACCEPTANCE[number] = (title, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
