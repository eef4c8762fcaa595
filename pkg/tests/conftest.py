import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")
    config._criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
        item.config._criteria.append((mark.args[0], status, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in config._criteria:
        line = f"{status}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
