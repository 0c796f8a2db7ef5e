import pytest

from ctxcalc.kernels import available_backends, backend_name, set_backend


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        report.acceptance_name = marker.args[0]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for status, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            name = getattr(report, "acceptance_name", None)
            if name is not None:
                lines.append((report.location, f"ACCEPTANCE {name}: {verdict}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    """Run the decorated test once per installed kernel backend."""
    previous = backend_name()
    set_backend(request.param)
    yield request.param
    set_backend(previous)
