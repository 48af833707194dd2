from __future__ import annotations

import pytest

from eta_hecke.hecke import BasisCache

# filled by tests/test_acceptance.py, printed once at the end of the run
CRITERION_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def basis_cache():
    return BasisCache()


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    def order(key):
        digits = "".join(c for c in key if c.isdigit())
        return int(digits), key

    for key in sorted(CRITERION_LINES, key=order):
        terminalreporter.write_line(CRITERION_LINES[key])
