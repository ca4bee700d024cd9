"""
From base period to a verified timetable
========================================

Once L is fixed, each task is cut into equal blocks, one per cycle of length L,
and the cycle is repeated over the hyperperiod. The replay below checks the
five admissibility conditions and every deadline window with exact arithmetic.
"""

# %%
from cyclosched import build_schedule, render_gantt, validate_task_set, verify_schedule

ts = validate_task_set([(1, 5), (3, 16), (3, 19), (4, 22)], overhead="0.2")
sched = build_schedule(ts, 5)
print(render_gantt(sched))

# %%
report = verify_schedule(sched)
for c in report.conditions:
    print(c.number, "ok" if c.passed else c.counterexample)
print("deadlines met:", report.deadlines_met)
print("min slack per task:", report.deadline_report.slack_by_task())

# %%
# A base period that does not divide the work evenly gives rational blocks.
odd = build_schedule(validate_task_set([(3, 7)]), 3)
print(render_gantt(odd))
print(odd.notes)

# %%
# Breaking the timetable on purpose: move the second block onto the first.
from fractions import Fraction
from cyclosched.schedule import Slot

sched.cycle_order[1] = Slot(1, Fraction(0), Fraction(1))
bad = verify_schedule(sched)
print("passed:", bad.passed, "overlap:", bad[4].counterexample)
