import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the terminal summary."""
    state = {}

    def record(label: str, passed: bool, detail: str = "") -> bool:
        state.update(label=label, passed=passed, detail=detail)
        return passed

    yield record
    if state:
        rep = getattr(request.node, "rep_call", None)
        passed = state["passed"] and (rep is None or rep.passed)
        _ACCEPTANCE.append((state["label"], passed, state["detail"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split()[0][2:])):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {label}" + (f" -- {detail}" if detail else ""))
