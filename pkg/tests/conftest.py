import pytest

# criterion number -> (passed, summary); filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion.

    Usage: ``criterion(n, title)`` returns a callable taking (ok, detail).
    """
    def start(n, title):
        def done(ok, detail=""):
            ACCEPTANCE[n] = (bool(ok), f"{title}: {detail}" if detail else title)
            line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}  {ACCEPTANCE[n][1]}"
            print(line)
            return ok
        ACCEPTANCE[n] = (False, f"{title}: did not complete")
        return done
    return start


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}  {text}")
