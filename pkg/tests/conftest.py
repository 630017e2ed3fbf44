import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("quick", deadline=None, max_examples=20)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


class WriteLog(list):
    """List that counts element writes; slice writes count their length."""

    def __init__(self, items):
        super().__init__(items)
        self.writes = 0

    def __setitem__(self, i, value):
        if isinstance(i, slice):
            self.writes += len(range(*i.indices(len(self))))
        else:
            self.writes += 1
        super().__setitem__(i, value)


def audit(arr):
    """Swap ``arr``'s slot list for a write-counting copy and return it."""
    log = WriteLog(arr.a)
    arr.a = log
    arr.get = log.__getitem__
    return log


# acceptance criterion number -> (passed, one-line detail)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
