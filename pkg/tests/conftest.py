import pytest


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion, then assert."""
    def record(num: int, ok: bool, detail: str):
        line = "criterion %2d %s: %s" % (num, "PASS" if ok else "FAIL", detail)
        request.config._criterion_lines.append(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
