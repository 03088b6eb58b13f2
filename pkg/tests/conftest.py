import random

import pytest

from gadet.field import field_for_q


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def q9():
    return field_for_q(9)


@pytest.fixture(scope="session")
def q27():
    return field_for_q(27)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion, printed in the terminal summary."""
    state = {"number": None, "title": "", "detail": ""}

    def declare(number: int, title: str) -> dict:
        state["number"], state["title"] = number, title
        return state

    yield declare
    if state["number"] is None:
        return
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    detail = f" ({state['detail']})" if state["detail"] else ""
    ACCEPTANCE_LINES[state["number"]] = (
        f"criterion {state['number']:>2} {'PASS' if ok else 'FAIL'}: {state['title']}{detail}"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
