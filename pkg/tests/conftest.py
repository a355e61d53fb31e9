import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csplab.catalog import K2, K3, P2, T2  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def t2():
    return T2()


@pytest.fixture
def p2():
    return P2()


@pytest.fixture
def k2():
    return K2()


@pytest.fixture
def k3():
    return K3()


@pytest.fixture
def data_dir():
    return DATA


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion")
    config._criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and rep.when == "call":
        item.config._criteria.append((mark.args[0], mark.args[1], rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = sorted(config._criteria)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, text, ok, dur in rows:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {text} ({dur:.2f}s)")
