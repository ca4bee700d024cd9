from fractions import Fraction

import pytest
from hypothesis import strategies as st

from cyclosched import worked_instance, validate_task_set


@pytest.fixture
def worked():
    return worked_instance()


WORKED_JSON = {"tasks": [{"wcet": 1, "period": 5}, {"wcet": 3, "period": 16},
                        {"wcet": 3, "period": 19}, {"wcet": 4, "period": 22}],
              "overhead": {"num": 1, "den": 5}}


@st.composite
def task_sets(draw, max_tasks=6, max_period=40, max_overhead=Fraction(1, 2)):
    """Valid task sets; wcet <= T // M keeps U <= 1."""
    m = draw(st.integers(1, max_tasks))
    periods = draw(st.lists(st.integers(max(1, m), max_period), min_size=m, max_size=m))
    wcets = [draw(st.integers(1, max(1, T // m))) for T in periods]
    p = draw(st.fractions(0, max_overhead, max_denominator=20))
    return validate_task_set(zip(wcets, periods), p)


# acceptance verdicts, printed as one line each at the end of the session
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
