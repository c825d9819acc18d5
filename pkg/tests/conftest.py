import pytest

from cartanq.cartank import LieAlgebra
from cartanq.enveloping import Envelope, SeriesContext


@pytest.fixture(scope="session")
def ctx1():
    return SeriesContext(Envelope(LieAlgebra(1)), N=3)


@pytest.fixture(scope="session")
def ctx2():
    return SeriesContext(Envelope(LieAlgebra(2)), N=3)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion; all lines are printed at the end."""
    def record(cid, ok, text):
        line = f"[{'PASS' if ok else 'FAIL'}] {cid}: {text}"
        ACCEPTANCE_LINES.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
