import pytest

ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one part of a numbered acceptance criterion and assert it."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})

    def record(number, title, ok, detail=""):
        results.setdefault(number, [title, True, []])
        entry = results[number]
        entry[1] = entry[1] and ok
        entry[2].append(detail)
        print(f"criterion {number} [{title}]: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok, details = results[number]
        terminalreporter.write_line(f"{number}. {'PASS' if ok else 'FAIL'}  {title}: {'; '.join(details)}")
