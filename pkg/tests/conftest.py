import math

import numpy as np
import pytest

from plategap import PlateGeometry, eigen_gap_table

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def geo():
    return PlateGeometry.reference()


@pytest.fixture(scope="session")
def table(geo):
    return eigen_gap_table(geo, 5, 5)


@pytest.fixture(scope="session")
def c_lookup(table):
    vals = table.values()
    return lambda m, j: float(vals[j - 1, m - 1])


@pytest.fixture
def record():
    """Log one acceptance line; printed in the terminal summary."""
    def _record(number, title, passed, detail=""):
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
