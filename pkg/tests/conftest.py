import pytest

from dagpart.graph import DirectedGraph

# filled by test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def make_chain3():
    return DirectedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)])


def make_diamond():
    return DirectedGraph.from_edges(4, [(0, 1, 1), (0, 2, 2), (1, 3, 1), (2, 3, 3)])


@pytest.fixture
def chain3():
    return make_chain3()


@pytest.fixture
def diamond():
    return make_diamond()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
