from pathlib import Path

import pytest

from foxpalette.diagram import parse_pd

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "foxpalette" / "fixtures"


def load(name):
    return parse_pd((FIXTURES / f"{name}.pd").read_text())


@pytest.fixture
def trefoil():
    return load("trefoil")


@pytest.fixture
def figure8():
    return load("figure8")


@pytest.fixture
def six_two():
    return load("6_2")


@pytest.fixture
def kink():
    return load("unknot")


ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(n, ok, detail)."""
    def record(n, ok, detail=""):
        ACCEPTANCE[n] = (bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
