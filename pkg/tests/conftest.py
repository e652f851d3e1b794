import pytest

_RESULTS = {}


@pytest.fixture(scope="session")
def acceptance_results():
    """Criterion id -> report, filled by the acceptance tests and echoed in the summary."""
    return _RESULTS


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS):
        rep = _RESULTS[cid]
        terminalreporter.write_line(f"criterion {cid} {rep['status']}  {rep['name']}")
