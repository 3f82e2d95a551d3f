import pytest

_ACCEPTANCE: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_ac"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        key = item.name[len("test_"):].upper()
        if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
            _ACCEPTANCE[key] = (doc, "PASS" if rep.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        doc, status = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {doc}: {status}")
