"""Period quantization and the base-period objective.

For a base period L every task period is rounded down to a multiple of L,
``T'_i = floor(T_i / L) * L``. Shrinking periods costs extra utilization

    F1(L) = sum_i (wcet_i / T'_i - wcet_i / T_i)

and running one block of every task per cycle costs ``F2(L) = M * p / L`` in
context switches. The objective is ``F(L) = F1(L) + F2(L)``; a base period is
feasible when the quantized utilization ``U' = U + F1`` stays <= 1 and F < 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from cyclosched.errors import BasePeriodExceedsPeriod, BasePeriodOutOfRange
from cyclosched.taskset import (
    TaskSet, baseline_utilization, format_decimal, rational_to_json)


@dataclass(frozen=True)
class ObjectiveBreakdown:
    L: int
    quantized_periods: Tuple[int, ...]
    k: Tuple[int, ...]
    f1: Fraction
    f2: Fraction
    quantized_utilization: Fraction

    @property
    def f(self) -> Fraction:
        return self.f1 + self.f2

    @property
    def feasible(self) -> bool:
        return self.quantized_utilization <= 1 and self.f < 1

    @property
    def total_demand(self) -> Fraction:
        """U' + M*p/L. Not used for feasibility; reported for users who want it."""
        return self.quantized_utilization + self.f2

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "quantized_periods": list(self.quantized_periods),
            "k": list(self.k),
            "f1": rational_to_json(self.f1),
            "f2": rational_to_json(self.f2),
            "f": rational_to_json(self.f),
            "quantized_utilization": rational_to_json(self.quantized_utilization),
            "feasible": self.feasible,
            "total_demand_le_1": self.total_demand <= 1,
        }


def quantize_period(T: int, L: int) -> int:
    """Largest multiple of ``L`` not exceeding ``T``."""
    if L < 1:
        raise BasePeriodOutOfRange(f"base period must be >= 1, got {L}")
    if L > T:
        raise BasePeriodExceedsPeriod(f"base period {L} exceeds period {T}")
    return (T // L) * L


def growth_terms(ts: TaskSet, L: int) -> List[Fraction]:
    """Per-task utilization growth ``wcet/T' - wcet/T`` in task order."""
    return [Fraction(t.wcet, quantize_period(t.period, L)) - t.utilization
            for t in ts.tasks]


def utilization_growth(ts: TaskSet, L: int) -> Fraction:
    return sum(growth_terms(ts, L), Fraction(0))


def switch_overhead(ts: TaskSet, L: int) -> Fraction:
    if L < 1:
        raise BasePeriodOutOfRange(f"base period must be >= 1, got {L}")
    return ts.M * ts.overhead / L


def objective(ts: TaskSet, L: int) -> ObjectiveBreakdown:
    """Evaluate F and its components at base period ``L`` in [1, T1]."""
    if not 1 <= L <= ts.min_period:
        raise BasePeriodOutOfRange(
            f"base period {L} outside [1, {ts.min_period}]")
    tq = tuple(quantize_period(t.period, L) for t in ts.tasks)
    f1 = sum((Fraction(t.wcet, q) - t.utilization for t, q in zip(ts.tasks, tq)),
             Fraction(0))
    return ObjectiveBreakdown(
        L=L,
        quantized_periods=tq,
        k=tuple(q // L for q in tq),
        f1=f1,
        f2=switch_overhead(ts, L),
        quantized_utilization=baseline_utilization(ts) + f1,
    )


def objective_table(ts: TaskSet) -> List[ObjectiveBreakdown]:
    """Breakdowns for L = T1 down to 1."""
    return [objective(ts, L) for L in range(ts.min_period, 0, -1)]


def format_table(rows: List[ObjectiveBreakdown], digits: int = 3) -> str:
    """Two-row text table, ``L`` over ``F``, tab separated."""
    head = "L\t" + "\t".join(str(r.L) for r in rows)
    vals = "F\t" + "\t".join(format_decimal(r.f, digits) for r in rows)
    return head + "\n" + vals
