
import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, budget): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title, budget = mark.args
    entry = _results.setdefault(number, {"title": title, "budget": budget, "passed": True, "seconds": 0.0})
    measured = dict(rep.user_properties).get("elapsed")
    if measured is not None:
        entry["seconds"] = measured
    if rep.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        e = _results[number]
        status = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {status}  {e['title']}  ({e['seconds']:.1f}s, budget {e['budget']}s)"
        )
