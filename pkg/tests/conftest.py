import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", deadline=None, max_examples=15)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LAMBDAS = (0.0, 0.5, 1.0, 2.5)


@pytest.fixture(params=LAMBDAS, ids=lambda l: f"lam={l}")
def lam(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def disk_points(rng, n, rmax):
    r = rmax * np.sqrt(rng.random(n))
    return r * np.exp(1j * (2 * rng.random(n) - 1) * np.pi)


# -- acceptance summary: one line per criterion --------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    num, title = mark.args
    _ACCEPTANCE[num] = (title, "PASS" if rep.passed else "FAIL", rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, status, dt = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {title}  ({dt:.1f} s)")
