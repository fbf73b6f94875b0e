import re
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_(A\d+)_", report.nodeid)
    if not m:
        return
    key = m.group(1)
    if report.failed:
        _ACCEPTANCE[key] = ("FAIL", report.nodeid)
    elif report.when == "call" and key not in _ACCEPTANCE:
        _ACCEPTANCE[key] = ("PASS", report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k[1:])):
        verdict, nodeid = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{key:<4} {verdict}  {nodeid.split('::')[-1]}")
