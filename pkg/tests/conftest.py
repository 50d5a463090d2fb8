import pytest

_ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    """Record one summary line per acceptance criterion."""
    log = request.config.stash.setdefault(_ACCEPTANCE_KEY, {})

    def record(number, title, passed, detail):
        status = "PASS" if passed else "FAIL"
        log[number] = f"criterion {number:>2} {status}  {title}: {detail}"
        print(log[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE_KEY, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        terminalreporter.write_line(log[number])
