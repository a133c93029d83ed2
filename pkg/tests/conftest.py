import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n = _criterion_of(report)
    if n is None:
        return
    ok = report.outcome == "passed"
    _acceptance[n] = _acceptance.get(n, True) and ok


def _criterion_of(report):
    for kw in report.keywords:
        if kw.startswith("criterion_"):
            return int(kw.split("_")[1])
    return None


@pytest.hookimpl(tryfirst=True)
def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            item.keywords[f"criterion_{marker.args[0]}"] = True
            item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {'PASS' if _acceptance[n] else 'FAIL'}")
