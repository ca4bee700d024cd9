"""
Choosing a base period for four tasks
=====================================

Four periodic tasks with wcets 1, 3, 3, 4 and periods 5, 16, 19, 22 share one
processor. Each context switch costs p = 0.2 time units. We look for the base
period L that minimizes the objective F(L) = F1(L) + F2(L).
"""

# %%
# Build and validate the task set. Timing values stay exact rationals.
from cyclosched import (
    bnb_optimize, brute_force_optimize, format_table, objective_table,
    validate_task_set)

ts = validate_task_set([(1, 5), (3, 16), (3, 19), (4, 22)], overhead="0.2")
print("tasks:", ts.tasks)

# %%
# F for every candidate L, from the shortest period down to 1.
rows = objective_table(ts)
print(format_table(rows))
for r in rows:
    print(f"L={r.L}  T'={list(r.quantized_periods)}  F1={r.f1}  F2={r.f2}  F={r.f}")

# %%
# Exhaustive search and branch and bound agree; the latter touches fewer terms.
oracle = brute_force_optimize(ts)
bnb = bnb_optimize(ts)
print(f"oracle: L={oracle.best_L} F={oracle.f} steps={oracle.steps}")
print(f"bnb:    L={bnb.best_L} F={bnb.f} steps={bnb.steps} frontier={bnb.max_frontier}")

# %%
# The search order, event by event.
trace = []
bnb_optimize(ts, trace=trace)
for event, kind, L, cost, consumed in trace:
    print(f"{event:5s} {kind:9s} L={L} cost={float(cost):.4f} terms={consumed}")
