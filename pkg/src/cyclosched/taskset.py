"""Periodic task sets: validation, baseline quantities and the JSON input format.

A task set is M periodic tasks ``(wcet, period)`` in integer time units plus
``overhead``, the average cost of one context switch. Tasks are kept sorted by
period (stable, so equal periods keep their input order) and all derived
quantities are exact :class:`fractions.Fraction` values.
"""

import json
import math
import operator
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Sequence, Tuple, Union

from cyclosched.errors import (
    EmptySet,
    NonPositiveTiming,
    Overutilized,
    ParseError,
    TaskSetError,
    WcetExceedsPeriod,
)

RationalLike = Union[int, str, Fraction]


class OverheadWarning(UserWarning):
    """Switching overhead leaves no room at the largest base period."""


@dataclass(frozen=True)
class Task:
    wcet: int
    period: int

    @property
    def utilization(self) -> Fraction:
        return Fraction(self.wcet, self.period)


@dataclass(frozen=True)
class TaskSet:
    tasks: Tuple[Task, ...]
    overhead: Fraction

    @property
    def M(self) -> int:
        return len(self.tasks)

    @property
    def periods(self) -> List[int]:
        return [t.period for t in self.tasks]

    @property
    def wcets(self) -> List[int]:
        return [t.wcet for t in self.tasks]

    @property
    def min_period(self) -> int:
        """T1, the upper end of the base period search range."""
        return self.tasks[0].period

    def __iter__(self):
        return iter(self.tasks)

    def __len__(self):
        return len(self.tasks)


def to_fraction(value: RationalLike) -> Fraction:
    """Convert an int, decimal string or Fraction to an exact Fraction.

    Binary floats are refused because ``0.2`` is not exactly one fifth.
    """
    if isinstance(value, bool):
        raise TaskSetError(f"expected a rational number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise TaskSetError(f"cannot parse {value!r} as an exact rational") from exc
    if isinstance(value, float):
        raise TaskSetError(
            f"float {value!r} is not exact; pass a decimal string or Fraction")
    raise TaskSetError(f"expected a rational number, got {type(value).__name__}")


def _as_int(value, what: str) -> int:
    if isinstance(value, bool):
        raise TaskSetError(f"{what} must be an integer, got {value!r}")
    if isinstance(value, float):
        if not math.isfinite(value) or not value.is_integer():
            raise TaskSetError(f"{what} must be a finite integer, got {value!r}")
        return int(value)
    try:
        return operator.index(value)
    except TypeError:
        raise TaskSetError(f"{what} must be an integer, got {value!r}") from None


def validate_task_set(tasks: Iterable, overhead: RationalLike = 0) -> TaskSet:
    """Build a validated :class:`TaskSet`.

    Args:
        tasks: ``(wcet, period)`` pairs or :class:`Task` objects, in any order.
        overhead: average per-switch overhead p, exact (int, decimal string or
            Fraction).

    Raises:
        EmptySet, NonPositiveTiming, WcetExceedsPeriod, Overutilized

    Warns:
        OverheadWarning: when ``M*p/T1 > 1 - F1(T1)``, i.e. the switching cost
        alone rules out the largest base period.
    """
    raw = []
    for idx, item in enumerate(tasks):
        if isinstance(item, Task):
            wcet, period = item.wcet, item.period
        else:
            try:
                wcet, period = item
            except (TypeError, ValueError):
                raise TaskSetError(f"task {idx}: expected a (wcet, period) pair") from None
        wcet = _as_int(wcet, f"task {idx} wcet")
        period = _as_int(period, f"task {idx} period")
        if wcet < 1 or period < 1:
            raise NonPositiveTiming(
                f"task {idx}: wcet and period must be >= 1 (got {wcet}, {period})")
        if wcet > period:
            raise WcetExceedsPeriod(f"task {idx}: wcet {wcet} > period {period}")
        raw.append(Task(wcet, period))
    if not raw:
        raise EmptySet("task set must contain at least one task")

    p = to_fraction(overhead)
    if p < 0:
        raise TaskSetError(f"overhead must be non-negative, got {p}")

    # sorted() is stable: equal periods keep input order
    ordered = tuple(sorted(raw, key=lambda t: t.period))
    ts = TaskSet(ordered, p)

    u = baseline_utilization(ts)
    if u > 1:
        raise Overutilized(u)

    t1 = ts.min_period
    growth_at_t1 = sum((Fraction(t.wcet, (t.period // t1) * t1) - t.utilization
                        for t in ordered), Fraction(0))
    if ts.M * p / t1 > 1 - growth_at_t1:
        warnings.warn(
            f"switch overhead M*p/T1 = {ts.M * p / t1} exceeds 1 - F1(T1) = "
            f"{1 - growth_at_t1}", OverheadWarning, stacklevel=2)
    return ts


def baseline_utilization(ts: TaskSet) -> Fraction:
    """Exact sum of wcet/period over the set."""
    return sum((t.utilization for t in ts.tasks), Fraction(0))


def gcd_base_period(ts: TaskSet) -> int:
    """GCD of all periods: the naive base period before optimization."""
    return reduce(math.gcd, ts.periods)


# -- JSON ---------------------------------------------------------------------

def rational_to_json(x: Fraction, digits: int = 6) -> dict:
    """``{"num", "den", "decimal"}``; the decimal string is for display only."""
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator,
            "decimal": format_decimal(x, digits)}


def format_decimal(x: Fraction, digits: int = 6) -> str:
    # round() on a Fraction is exact and rounds half to even
    scaled = round(Fraction(x) * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def rational_from_json(value, field: str = "value") -> Fraction:
    if isinstance(value, dict):
        extra = set(value) - {"num", "den", "decimal"}
        if extra or not {"num", "den"} <= set(value):
            raise ParseError(f"{field}: expected {{num, den}}, got keys {sorted(value)}")
        num, den = value["num"], value["den"]
        if isinstance(num, bool) or isinstance(den, bool) \
                or not isinstance(num, int) or not isinstance(den, int):
            raise ParseError(f"{field}: num and den must be integers")
        if den == 0:
            raise ParseError(f"{field}: zero denominator")
        return Fraction(num, den)
    if isinstance(value, str):
        try:
            return to_fraction(value)
        except TaskSetError as exc:
            raise ParseError(f"{field}: {exc}") from None
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise ParseError(f"{field}: expected {{num, den}} or a decimal string, got {value!r}")


def task_set_from_dict(doc) -> TaskSet:
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    extra = set(doc) - {"tasks", "overhead"}
    if extra:
        raise ParseError(f"top level: unknown field(s) {sorted(extra)}")
    if "tasks" not in doc:
        raise ParseError("top level: missing field 'tasks'")
    if not isinstance(doc["tasks"], list):
        raise ParseError("tasks: expected a list")
    pairs = []
    for i, entry in enumerate(doc["tasks"]):
        if not isinstance(entry, dict):
            raise ParseError(f"tasks[{i}]: expected an object")
        extra = set(entry) - {"wcet", "period"}
        missing = {"wcet", "period"} - set(entry)
        if extra:
            raise ParseError(f"tasks[{i}]: unknown field(s) {sorted(extra)}")
        if missing:
            raise ParseError(f"tasks[{i}]: missing field(s) {sorted(missing)}")
        for key in ("wcet", "period"):
            v = entry[key]
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"tasks[{i}].{key}: expected an integer, got {v!r}")
        pairs.append((entry["wcet"], entry["period"]))
    overhead = rational_from_json(doc.get("overhead", 0), "overhead")
    return validate_task_set(pairs, overhead)


def task_set_to_dict(ts: TaskSet) -> dict:
    p = ts.overhead
    return {"tasks": [{"wcet": t.wcet, "period": t.period} for t in ts.tasks],
            "overhead": {"num": p.numerator, "den": p.denominator}}


def loads_task_set(text: str) -> TaskSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return task_set_from_dict(doc)


def load_task_set(path) -> TaskSet:
    """Read and validate a task-set JSON file."""
    with open(path, encoding="utf-8") as fh:
        return loads_task_set(fh.read())


def worked_instance() -> TaskSet:
    """The four-task reference instance: wcet {1,3,3,4}, periods {5,16,19,22}, p = 1/5."""
    return validate_task_set([(1, 5), (3, 16), (3, 19), (4, 22)], Fraction(1, 5))


def make_task_set(wcets: Sequence[int], periods: Sequence[int],
                  overhead: RationalLike = 0) -> TaskSet:
    if len(wcets) != len(periods):
        raise TaskSetError("wcets and periods differ in length")
    return validate_task_set(zip(wcets, periods), overhead)
