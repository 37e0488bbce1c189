import sys


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance PASS/FAIL lines after the run."""
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
