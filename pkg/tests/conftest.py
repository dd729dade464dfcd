import pytest

from pixetendue import kernels


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    impl = kernels.backends()[request.param]
    for name in ("etendue_sum", "thermal_counts", "power_sums"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


# PASS/FAIL lines recorded by the acceptance suite, repeated after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
