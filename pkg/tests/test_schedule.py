import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cyclosched import (
    HyperperiodOverflow, InfeasibleBasePeriod, build_schedule, expand_timeline,
    hyperperiod, objective, render_gantt, validate_task_set)
from cyclosched.schedule import schedule_from_dict

from conftest import task_sets


def test_worked_schedule(worked):
    s = build_schedule(worked, 5)
    assert [p.k for p in s.plans] == [1, 3, 3, 4]
    assert all(p.block_len == 1 for p in s.plans)
    assert s.free_interval == 1
    assert s.hyperperiod_Tc == 60 and s.n_cycles == 12
    assert [(x.task_index, x.start, x.end) for x in s.cycle_order] == \
        [(0, 0, 1), (1, 1, 2), (2, 2, 3), (3, 3, 4)]
    assert s.integral_blocks and not s.notes


def test_single_task():
    s = build_schedule(validate_task_set([(2, 4)]), 4)
    assert s.plans[0].k == 1 and s.plans[0].block_len == 2
    assert s.hyperperiod_Tc == 4 and s.free_interval == 2


def test_rational_blocks():
    s = build_schedule(validate_task_set([(3, 7)]), 3)
    assert s.plans[0].k == 2
    assert s.plans[0].block_len == Fraction(3, 2)
    assert s.plans[0].delta == Fraction(1, 2)
    assert s.hyperperiod_Tc == 6
    assert not s.integral_blocks and s.notes


def test_order_by_quantized_period():
    # periods 9 and 10 both quantize to 8 at L=4; index order breaks the tie
    ts = validate_task_set([(1, 10), (1, 4), (1, 9)])
    s = build_schedule(ts, 4)
    assert [x.task_index for x in s.cycle_order] == [0, 1, 2]
    ts = validate_task_set([(1, 12), (1, 5), (1, 9)])
    s = build_schedule(ts, 5)   # T' = 5, 5, 10
    assert [x.task_index for x in s.cycle_order] == [0, 1, 2]
    s = build_schedule(ts, 3)   # T' = 3, 9, 12
    assert [ts.tasks[x.task_index].period for x in s.cycle_order] == [5, 9, 12]


def test_infeasible_base_period():
    with pytest.raises(InfeasibleBasePeriod):
        build_schedule(validate_task_set([(2, 5), (5, 9)], "0.2"), 5)


@pytest.mark.parametrize("ks, L, tc", [([1, 3, 3, 4], 5, 60), ([1], 7, 7), ([2, 3, 5], 2, 60)])
def test_hyperperiod(ks, L, tc):
    assert hyperperiod(ks, L) == tc


def test_hyperperiod_overflow():
    with pytest.raises(HyperperiodOverflow):
        hyperperiod([2 ** 40, 2 ** 40 - 1], 2 ** 10)
    with pytest.raises(HyperperiodOverflow):
        hyperperiod([3, 5], 10, limit=100)


def test_expand_worked(worked):
    blocks = expand_timeline(build_schedule(worked, 5))
    assert len(blocks) == 48
    assert max(b.end for b in blocks) == 59 < 60
    assert blocks[4] == (1, 0, 5, 6)


def test_expand_small():
    assert [(b.start, b.end) for b in expand_timeline(build_schedule(validate_task_set([(2, 4)]), 4))] \
        == [(0, 2)]
    blocks = expand_timeline(build_schedule(validate_task_set([(3, 7)]), 3))
    assert [(b.start, b.end) for b in blocks] == [(0, Fraction(3, 2)), (3, Fraction(9, 2))]


def feasible_pairs():
    @st.composite
    def strat(draw):
        ts = draw(task_sets())
        Ls = [L for L in range(1, ts.min_period + 1)
              if objective(ts, L).quantized_utilization <= 1]
        return ts, draw(st.sampled_from(Ls))
    return strat()


@given(feasible_pairs())
def test_schedule_properties(pair):
    ts, L = pair
    s = build_schedule(ts, L)
    for plan, t in zip(s.plans, ts.tasks):
        assert plan.k * plan.block_len == t.wcet
        assert 0 < plan.delta <= 1
    assert sum(p.block_len for p in s.plans) + s.free_interval == L
    assert s.free_interval >= 0
    assert s.hyperperiod_Tc == math.lcm(*(p.k for p in s.plans)) * L
    slots = s.cycle_order
    assert all(a.end == b.start for a, b in zip(slots, slots[1:]))
    assert slots[0].start == 0 and slots[-1].end <= L
    # budget: any k_i consecutive cycles deliver exactly wcet_i
    for plan, t in zip(s.plans, ts.tasks):
        assert plan.k * next(x.end - x.start for x in slots if x.task_index == plan.task_index) == t.wcet


@given(task_sets())
def test_free_interval_sign_tracks_utilization(ts):
    for L in range(1, ts.min_period + 1):
        ob = objective(ts, L)
        free = L - sum(Fraction(t.wcet, k) for t, k in zip(ts.tasks, ob.k))
        assert (free >= 0) == (ob.quantized_utilization <= 1)


def test_json_roundtrip(worked):
    s = build_schedule(worked, 5)
    doc = s.to_dict()
    assert doc["Tc"] == 60 and doc["free_interval"]["num"] == 1
    back = schedule_from_dict(doc)
    assert back.cycle_order == s.cycle_order and back.plans == s.plans
    assert back.task_set == worked


def test_gantt(worked):
    text = render_gantt(build_schedule(worked, 5))
    lines = text.splitlines()
    assert len(lines) == 13
    assert lines[1].endswith("|0123.|")
    text = render_gantt(build_schedule(validate_task_set([(3, 7)]), 3))
    assert text.splitlines()[1].endswith("|000...|")
