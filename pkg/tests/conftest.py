import pytest

from virtualcalc.config import Settings, _current

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(autouse=True)
def _default_settings():
    token = _current.set(Settings())
    yield
    _current.reset(token)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
