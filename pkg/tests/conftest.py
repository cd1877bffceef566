import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria: dict[str, str] = {}
_measured: dict[str, str] = {}


@pytest.fixture
def measured(request):
    """Attach a short measurement string to the criterion's summary line."""
    name = request.node.name

    def note(text: str) -> None:
        _measured[name] = text
        print(f"{name}: {text}")

    return note


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        extra = f"  [{_measured[name]}]" if name in _measured else ""
        terminalreporter.write_line(f"{_criteria[name]}  {name}{extra}")
