import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from faultloc.slicing import parse_graph  # noqa: E402
from faultloc.spectra import parse_spectrum  # noqa: E402
from helpers import MIDDLE_DOT, MIDDLE_SPEC  # noqa: E402

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    label = marker.args[0]
    ok = rep.passed if rep.when == "call" else False
    prev = _ACCEPTANCE.get(label, True)
    _ACCEPTANCE[label] = prev and ok


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][2:])):
        status = "PASS" if _ACCEPTANCE[label] else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")


@pytest.fixture(scope="session")
def middle():
    return parse_spectrum(MIDDLE_SPEC)


@pytest.fixture(scope="session")
def middle_graph():
    return parse_graph(MIDDLE_DOT)
