"""Shared pytest plumbing: the acceptance-criteria summary block."""

ACCEPTANCE_RESULTS = {}


def record_criterion(num, outcome, title):
    """Store one criterion outcome for the end-of-run summary."""
    ACCEPTANCE_RESULTS[num] = (outcome, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        outcome, title = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line("[C%02d] %s %s" % (num, outcome, title))
