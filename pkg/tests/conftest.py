import pytest

from eondpp.costmodel import ModulationModel, RMSACostModel
from eondpp.graph import Network

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report_criterion():
    def report(number, name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}"
        if detail:
            line += f" -- {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return report


def build(n, omega, edges):
    net = Network(n, omega)
    for e in edges:
        net.add_edge(*e)
    return net


@pytest.fixture
def long_reach():
    """g=1 with a reach far beyond any fixture path, so units stay at g."""
    return RMSACostModel(1, ModulationModel(4, 1000.0))


@pytest.fixture
def trap_net():
    # s=0, a=1, b=2, t=3
    return build(4, 4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 2, 3), (1, 3, 3)])


@pytest.fixture
def cycle_net():
    # s=0 - a=1 - t=2 - b=3 - s
    return build(4, 4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])


@pytest.fixture
def single_edge_net():
    return build(2, 4, [(0, 1, 1)])
