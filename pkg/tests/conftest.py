import numpy as np
import pytest

from beq import BlaschkeProduct

FIG2_ZEROS = [0.5, 0.5 + 0.5j, 2j / 3, -0.75j, -0.7 + 0.6j]
FIG1_ZEROS = [0.5, 0.5 + 0.5j]


def random_zeros(rng, n, rmax=0.9):
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(1j * rng.uniform(0, 2 * np.pi, n))


def random_product(rng, n, rmax=0.9, monic=True):
    chi = 1.0 if monic else np.exp(1j * rng.uniform(0, 2 * np.pi))
    return BlaschkeProduct(random_zeros(rng, n, rmax), chi)


@pytest.fixture
def fig2():
    return BlaschkeProduct(FIG2_ZEROS)


@pytest.fixture
def fig1():
    return BlaschkeProduct(FIG1_ZEROS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# ---- acceptance summary: one line per criterion ----

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    state = _acceptance.setdefault(number, {"title": title, "ok": True, "seen": False})
    if report.when == "call" or report.outcome != "passed":
        state["seen"] = True
        state["ok"] &= report.outcome == "passed"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        state = _acceptance[number]
        if state["seen"]:
            verdict = "PASS" if state["ok"] else "FAIL"
            terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {state['title']}")
