import pytest

from uniform_turan.core import Hypergraph, canonicalize

# The fan on a=0, b=1, c=2, d=3, e=4.
FAN = canonicalize(Hypergraph(3, 5, ((0, 1, 3), (1, 2, 3), (1, 3, 4))))
K4 = canonicalize(Hypergraph(3, 4, ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))))
K4_MINUS = canonicalize(Hypergraph(3, 4, ((0, 1, 2), (0, 1, 3), (0, 2, 3))))


@pytest.fixture
def fan():
    return FAN


@pytest.fixture
def k4():
    return K4


@pytest.fixture
def k4_minus():
    return K4_MINUS


# Acceptance verdict lines, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
