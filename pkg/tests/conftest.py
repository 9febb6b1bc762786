import numpy as np
import pytest

from aoimoments import make_degenerate, make_geometric, make_two_point, solve_alpha
from aoimoments import simulator

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = report.user_properties and dict(report.user_properties).get("acceptance")
    if label:
        _ACCEPTANCE.append((label, "PASS" if report.passed else "FAIL"))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("acceptance")
    if marker:
        item.user_properties.append(("acceptance", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{outcome}  {label}")


@pytest.fixture(scope="session")
def paper_dists():
    """The three mean-8 arrival laws used in the sweeps."""
    return {
        "degenerate": make_degenerate(8),
        "two_point": make_two_point(1, 15, 0.5),
        "geometric": make_geometric(0.125),
    }


@pytest.fixture(scope="session")
def geom_run():
    """10^7-block run at geometric(0.125) arrivals, mu = 0.25."""
    cfg = simulator.SimConfig(make_geometric(0.125), 0.25, 10_000_000, seed=20240601)
    return simulator.run(cfg)


@pytest.fixture(scope="session")
def geom_solution():
    return solve_alpha(make_geometric(0.125), 0.25)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
