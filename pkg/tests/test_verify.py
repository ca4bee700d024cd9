import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclosched import (
    build_schedule, check_deadlines, objective, simulate, validate_task_set,
    verify_conditions, verify_schedule)
from cyclosched.errors import HyperperiodOverflow
from cyclosched.schedule import Slot, expand_timeline
from cyclosched.verify import SimulationTrace

from conftest import task_sets


def test_worked_trace(worked):
    trace = simulate(build_schedule(worked, 5))
    assert trace.utilization_observed == Fraction(4, 5)
    assert len(trace.events) == 48
    assert trace.cycle_end(11) == 59 and trace.cycle_end(12) is None
    assert all(e.end > e.start for e in trace.events)
    assert trace.events == sorted(trace.events, key=lambda e: e.start)


def test_small_traces():
    trace = simulate(build_schedule(validate_task_set([(2, 4)]), 4))
    assert trace.utilization_observed == Fraction(1, 2) and len(trace.events) == 1
    trace = simulate(build_schedule(validate_task_set([(3, 7)]), 3))
    assert len(trace.events) == 2 and trace.utilization_observed == Fraction(3, 6)


def test_worked_passes_everything(worked):
    report = verify_schedule(build_schedule(worked, 5))
    assert report.passed
    assert [c.passed for c in report.conditions] == [True] * 5
    assert report.per_cycle_within_bounds


def test_worked_deadlines(worked):
    trace = simulate(build_schedule(worked, 5))
    dl = check_deadlines(worked, trace)
    assert dl.met
    last = dl.tasks[3]
    assert (last.window, last.n_windows, last.service) == (20, 3, [4, 4, 4])
    # a job finishes in its k-th block, one unit into the last cycle of its window
    assert last.completion == [19, 39, 59] and last.slack == [1, 1, 1]
    assert dl.slack_by_task() == {0: 4, 1: 3, 2: 2, 3: 1}


def test_small_deadlines():
    ts = validate_task_set([(2, 4)])
    dl = check_deadlines(ts, simulate(build_schedule(ts, 4)))
    assert dl.met and dl.tasks[0].service == [2] and dl.slack_by_task() == {0: 2}
    ts = validate_task_set([(3, 7)])
    dl = check_deadlines(ts, simulate(build_schedule(ts, 3)))
    assert dl.met and dl.tasks[0].service == [3] and dl.tasks[0].completion == [Fraction(9, 2)]


def test_overlap_detected(worked):
    s = build_schedule(worked, 5)
    s.cycle_order[1] = Slot(1, Fraction(0), Fraction(1))
    report = verify_schedule(s)
    assert not report[4].passed
    cx = report[4].counterexample
    assert cx["first"][1:] == [0, {"num": 0, "den": 1, "decimal": "0.000000"},
                               {"num": 1, "den": 1, "decimal": "1.000000"}]
    assert cx["second"][1] == 1
    assert not report.passed


def test_lengthened_block_detected(worked):
    s = build_schedule(worked, 5)
    events = simulate(s).events
    i = next(n for n, e in enumerate(events) if e.cycle == 1 and e.task_index == 3)
    events[i] = events[i]._replace(end=events[i].end + Fraction(1, 2))
    trace = SimulationTrace.from_events(s.L, s.hyperperiod_Tc, events)
    report = verify_conditions(s, trace)
    assert not report[1].passed
    assert report[1].counterexample["cycle"] == 1
    assert report[1].counterexample["task"] == 3
    assert not check_deadlines(worked, trace).met


def test_shifted_cycle_detected(worked):
    s = build_schedule(worked, 5)
    events = [e._replace(start=e.start + 1, end=e.end + 1) if e.cycle == 2 else e
              for e in simulate(s).events]
    trace = SimulationTrace.from_events(s.L, s.hyperperiod_Tc, events)
    report = verify_conditions(s, trace)
    assert not report[2].passed and not report[3].passed
    assert report[3].counterexample["cycle"] == 2


def test_overrun_past_hyperperiod():
    ts = validate_task_set([(2, 4)])
    s = build_schedule(ts, 4)
    s.cycle_order[0] = Slot(0, Fraction(3), Fraction(5))
    report = verify_schedule(s)
    assert not report[5].passed
    assert not report.per_cycle_within_bounds


@pytest.mark.parametrize("mutate", [
    lambda s: s.cycle_order.clear(),
    lambda s: setattr(s, "L", 0),
    lambda s: setattr(s, "hyperperiod_Tc", 0),
    lambda s: s.cycle_order.append(Slot(7, Fraction(2), Fraction(2))),
    lambda s: s.cycle_order.append(Slot(0, Fraction(-3), Fraction(-1))),
    lambda s: setattr(s, "hyperperiod_Tc", 7),
])
def test_verification_is_total(worked, mutate):
    s = build_schedule(worked, 5)
    mutate(s)
    report = verify_schedule(s)
    assert isinstance(report.to_dict(), dict)
    assert not report.passed


def feasible_pairs():
    @st.composite
    def strat(draw):
        ts = draw(task_sets(max_period=30))
        Ls = [L for L in range(1, ts.min_period + 1)
              if objective(ts, L).quantized_utilization <= 1
              and math.lcm(*objective(ts, L).k) * ts.M <= 20000]
        return ts, draw(st.sampled_from(Ls))
    return strat()


@settings(max_examples=150)
@given(feasible_pairs())
def test_built_schedules_are_admissible(pair):
    ts, L = pair
    s = build_schedule(ts, L)
    trace = simulate(s)
    report = verify_conditions(s, trace)
    assert report.conditions_passed, report.to_dict()
    dl = check_deadlines(ts, trace)
    assert dl.met
    assert trace.utilization_observed == objective(ts, L).quantized_utilization
    for t, served in zip(ts.tasks, dl.tasks):
        assert served.service == [t.wcet] * served.n_windows
        assert all(x >= 0 for x in served.slack)


def test_trace_matches_expanded_timeline(worked):
    for L in (5, 4, 3):
        s = build_schedule(worked, L)
        assert simulate(s).events == sorted(expand_timeline(s), key=lambda e: e.start)


def test_rational_trace_ticks():
    trace = simulate(build_schedule(validate_task_set([(3, 7)]), 3))
    assert trace.scale == 2
    assert list(trace.start) == [0, 6] and list(trace.end) == [3, 9]


def test_event_cap(worked):
    s = build_schedule(worked, 5)
    with pytest.raises(HyperperiodOverflow):
        simulate(s, max_events=47)
    assert len(simulate(s, max_events=48)) == 48


def test_missing_block_detected(worked):
    s = build_schedule(worked, 5)
    events = [e for e in simulate(s).events if not (e.cycle == 4 and e.task_index == 2)]
    report = verify_conditions(s, SimulationTrace.from_events(5, 60, events))
    assert not report[1].passed
    assert report[1].counterexample["cycle"] == 4 and report[1].counterexample["task"] == 2
