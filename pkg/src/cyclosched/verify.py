"""Replay a cyclic schedule over its hyperperiod and check that it is admissible.

The five checks:

1. equal blocks: each task's block length is the same in every cycle;
2. no arrival offset: a cycle's processing starts at its boundary ``j*L`` and
   each task keeps the same offset inside every cycle;
3. cycle shift: the start of cycle ``j+r`` is the start of cycle ``j`` plus ``r*L``;
4. mutual exclusion: no two blocks overlap;
5. completion: the last block ends no later than the hyperperiod ``Tc``.

Deadlines are checked separately by accumulating each task's service over its
quantized-period windows.

Times are rational. The trace stores them as integer ticks of ``1/scale`` time
units, where ``scale`` is the lcm of every block boundary's denominator, so
all comparisons are exact integer comparisons on numpy arrays.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence

import numpy as np

from cyclosched.errors import HyperperiodOverflow
from cyclosched.objective import quantize_period
from cyclosched.schedule import CyclicSchedule, TimedBlock
from cyclosched.taskset import TaskSet, rational_to_json

CONDITION_NAMES = {
    1: "equal blocks in every cycle",
    2: "processing starts at request arrival",
    3: "cycle starts shift by L",
    4: "no simultaneous execution",
    5: "hyperperiod completion",
}

MAX_EVENTS = 5_000_000
_INT64_SAFE = 2 ** 62


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass
class SimulationTrace:
    """Time-ordered block events over ``[0, Tc)``, in ticks of ``1/scale``."""
    L: int
    Tc: int
    scale: int
    cycle: np.ndarray
    task: np.ndarray
    start: np.ndarray
    end: np.ndarray

    @classmethod
    def from_events(cls, L: int, Tc: int, events: Sequence[TimedBlock]) -> "SimulationTrace":
        """Build a trace from explicit rational events (sorted here)."""
        scale = _lcm(Fraction(t).denominator for e in events for t in (e.start, e.end))
        dtype = _tick_dtype(len(events), max([abs(Fraction(t)) for e in events
                                               for t in (e.start, e.end)] + [Tc]), scale)
        cyc = np.array([e.cycle for e in events], dtype=np.int64)
        tsk = np.array([e.task_index for e in events], dtype=np.int64)
        st = np.array([int(Fraction(e.start) * scale) for e in events], dtype=dtype)
        en = np.array([int(Fraction(e.end) * scale) for e in events], dtype=dtype)
        order = np.lexsort((tsk, en, st)) if len(events) else np.arange(0)
        return cls(L, Tc, scale, cyc[order], tsk[order], st[order], en[order])

    def __len__(self):
        return len(self.start)

    def _time(self, ticks) -> Fraction:
        return Fraction(int(ticks), self.scale)

    @property
    def events(self) -> List[TimedBlock]:
        return [TimedBlock(int(c), int(t), self._time(s), self._time(e))
                for c, t, s, e in zip(self.cycle, self.task, self.start, self.end)]

    @property
    def utilization_observed(self) -> Fraction:
        if self.Tc <= 0:
            return Fraction(0)
        busy = int((self.end - self.start).sum()) if len(self) else 0
        return Fraction(busy, self.scale * self.Tc)

    def cycle_end(self, j: int) -> Optional[Fraction]:
        """gamma_j: end of the last block of cycle ``j``."""
        mask = self.cycle == j
        return self._time(self.end[mask].max()) if mask.any() else None


def _tick_dtype(n_events: int, max_time, scale: int):
    # sums of n_events tick values must not wrap; fall back to Python ints
    bound = (n_events + 1) * (int(max_time) + 1) * scale * 2
    return np.int64 if bound < _INT64_SAFE else object


def simulate(sched: CyclicSchedule, max_events: int = MAX_EVENTS) -> SimulationTrace:
    """Replay every cycle of the hyperperiod.

    Raises:
        HyperperiodOverflow: the replay would exceed ``max_events`` blocks.
    """
    slots = sched.cycle_order
    n = sched.n_cycles if sched.hyperperiod_Tc > 0 else 0
    total = n * len(slots)
    if total > max_events:
        raise HyperperiodOverflow(
            f"{n} cycles x {len(slots)} blocks = {total} events exceeds {max_events}")
    scale = _lcm(Fraction(b).denominator for s in slots for b in (s.start, s.end))
    top = max([abs(Fraction(b)) for s in slots for b in (s.start, s.end)] + [0])
    dtype = _tick_dtype(total, top + max(sched.hyperperiod_Tc, 0), scale)

    s0 = np.array([int(Fraction(s.start) * scale) for s in slots], dtype=dtype)
    e0 = np.array([int(Fraction(s.end) * scale) for s in slots], dtype=dtype)
    tk = np.array([s.task_index for s in slots], dtype=np.int64)
    shift = (np.arange(n, dtype=np.int64) * (sched.L * scale)).astype(dtype)
    start = (shift[:, None] + s0[None, :]).ravel()
    end = (shift[:, None] + e0[None, :]).ravel()
    cycle = np.repeat(np.arange(n, dtype=np.int64), len(slots))
    task = np.tile(tk, n)
    order = np.lexsort((task, end, start)) if total else np.arange(0)
    return SimulationTrace(sched.L, sched.hyperperiod_Tc, scale,
                           cycle[order], task[order], start[order], end[order])


@dataclass
class ConditionResult:
    number: int
    passed: bool = True
    counterexample: Optional[dict] = None

    def fail(self, **detail):
        # keep the first counterexample only
        if self.passed:
            self.passed = False
            self.counterexample = {k: _jsonable(v) for k, v in detail.items()}

    def to_dict(self) -> dict:
        return {"condition": self.number, "name": CONDITION_NAMES[self.number],
                "passed": self.passed, "counterexample": self.counterexample}


def _jsonable(v):
    if isinstance(v, Fraction):
        return rational_to_json(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


@dataclass
class TaskService:
    """Service and completion time for each quantized-period window of one task."""
    task_index: int
    wcet: int
    window: int
    n_windows: int
    service: List[Fraction]
    completion: List[Optional[Fraction]]

    @property
    def met(self) -> bool:
        return len(self.service) == self.n_windows > 0 and \
            all(s == self.wcet for s in self.service)

    @property
    def slack(self) -> List[Optional[Fraction]]:
        return [None if c is None else (m + 1) * self.window - c
                for m, c in enumerate(self.completion)]

    @property
    def min_slack(self) -> Optional[Fraction]:
        vals = [s for s in self.slack if s is not None]
        return min(vals) if vals else None


@dataclass
class DeadlineReport:
    met: bool
    tasks: List[TaskService]

    def slack_by_task(self) -> Dict[int, Fraction]:
        return {t.task_index: t.min_slack for t in self.tasks if t.min_slack is not None}


@dataclass
class VerificationReport:
    conditions: List[ConditionResult]
    utilization_observed: Fraction
    deadlines_met: Optional[bool] = None
    per_cycle_within_bounds: bool = True
    deadline_report: Optional[DeadlineReport] = field(default=None, repr=False)

    @property
    def conditions_passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def passed(self) -> bool:
        return self.conditions_passed and bool(self.deadlines_met)

    def __getitem__(self, number: int) -> ConditionResult:
        return self.conditions[number - 1]

    def to_dict(self) -> dict:
        doc = {
            "passed": self.passed,
            "conditions": [c.to_dict() for c in self.conditions],
            "deadlines_met": self.deadlines_met,
            "per_cycle_within_bounds": self.per_cycle_within_bounds,
            "utilization_observed": rational_to_json(self.utilization_observed),
        }
        if self.deadline_report is not None:
            doc["min_slack"] = {str(i): rational_to_json(s) for i, s in
                                sorted(self.deadline_report.slack_by_task().items())}
        return doc


def verify_conditions(sched: CyclicSchedule, trace: SimulationTrace) -> VerificationReport:
    """Check the five admissibility conditions; failures are reported, never raised."""
    L, D = trace.L, trace.scale
    t = trace._time
    c1, c2, c3, c4, c5 = (ConditionResult(n) for n in range(1, 6))
    n_cycles = trace.Tc // L if L > 0 and trace.Tc > 0 else 0
    report = VerificationReport([c1, c2, c3, c4, c5], trace.utilization_observed)

    cyc, tsk, st, en = trace.cycle, trace.task, trace.start, trace.end
    length = en - st

    bad = np.flatnonzero(length <= 0)
    if bad.size:
        i = bad[0]
        c1.fail(cycle=cyc[i], task=tsk[i], expected="positive length", actual=t(length[i]))

    inside = (cyc >= 0) & (cyc < n_cycles)
    if not inside.all():
        i = np.flatnonzero(~inside)[0]
        c3.fail(cycle=cyc[i], task=tsk[i], expected=f"cycle in [0, {n_cycles})",
                actual=cyc[i])

    tasks = np.union1d(np.array([p.task_index for p in sched.plans], dtype=np.int64), tsk)
    if n_cycles and tasks.size:
        ti = np.searchsorted(tasks, tsk[inside])
        ci = cyc[inside]
        shape = (tasks.size, n_cycles)
        lens = np.zeros(shape, dtype=length.dtype)
        np.add.at(lens, (ti, ci), length[inside])
        counts = np.zeros(shape, dtype=np.int64)
        np.add.at(counts, (ti, ci), 1)

        # 1: same per-task length in every cycle
        diff = lens != lens[:, :1]
        if diff.any():
            r, c = _first_by_cycle(diff)
            c1.fail(cycle=c, task=tasks[r], expected=t(lens[r, 0]), actual=t(lens[r, c]))

        # 2: per-task in-cycle offset is cycle invariant
        big = max(int(st.max()) if st.size else 0, trace.Tc * D) + 1
        offs = np.full(shape, big, dtype=object if st.dtype == object else np.int64)
        np.minimum.at(offs, (ti, ci), st[inside] - ci * (L * D))
        has = counts > 0
        first_off = np.where(has[:, :1], offs[:, :1], big)
        moved = has & has[:, :1] & (offs != first_off)
        if moved.any():
            r, c = _first_by_cycle(moved)
            c2.fail(cycle=c, task=tasks[r], expected=t(offs[r, 0]), actual=t(offs[r, c]))

        # 2 and 3: beta_j, the start of cycle j, equals the request time j*L
        beta = np.full(n_cycles, big, dtype=offs.dtype)
        np.minimum.at(beta, ci, st[inside])
        empty = np.bincount(ci, minlength=n_cycles) == 0
        expected = np.arange(n_cycles, dtype=np.int64) * (L * D)
        late = ~empty & (beta != expected)
        if late.any():
            j = np.flatnonzero(late)[0]
            c2.fail(cycle=j, task=None, expected=t(expected[j]), actual=t(beta[j]))
        if not empty[0]:
            drift = ~empty & (beta != beta[0] + expected)
            if drift.any():
                j = np.flatnonzero(drift)[0]
                c3.fail(cycle=j, task=None, expected=t(beta[0] + expected[j]), actual=t(beta[j]))
        if empty.any():
            c3.fail(cycle=np.flatnonzero(empty)[0], task=None,
                    expected="thread group processed", actual="empty cycle")

    # 4: events are sorted by start; compare each start with the latest end so far
    if st.size > 1:
        run_end = np.maximum.accumulate(en)
        clash = st[1:] < run_end[:-1]
        if clash.any():
            j = np.flatnonzero(clash)[0] + 1
            i = int(np.argmax(en[:j]))
            c4.fail(first=[cyc[i], tsk[i], t(st[i]), t(en[i])],
                    second=[cyc[j], tsk[j], t(st[j]), t(en[j])])

    # 5: hyperperiod form; the per-cycle form is reported alongside
    if st.size:
        last = int(en.max())
        if trace.Tc * D - last < 0:
            c5.fail(cycle=n_cycles - 1, task=None, expected=trace.Tc, actual=t(last))
        if int(st.min()) < 0:
            c5.fail(cycle=0, task=None, expected=0, actual=t(st.min()))
        lo = cyc * (L * D)
        report.per_cycle_within_bounds = bool(((st >= lo) & (en <= lo + L * D)).all())
    return report


def _first_by_cycle(mask: np.ndarray):
    """(row, col) of the earliest True column, lowest row within it."""
    cols = mask.any(axis=0)
    c = int(np.flatnonzero(cols)[0])
    r = int(np.flatnonzero(mask[:, c])[0])
    return r, c


def _cumulative_service(st: np.ndarray, en: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Busy time in [0, b) for each b, as sum of max(0, b-s) - max(0, b-e)."""
    s_sorted, e_sorted = np.sort(st), np.sort(en)
    zero = np.zeros(1, dtype=st.dtype)
    s_pref = np.concatenate([zero, np.cumsum(s_sorted)])
    e_pref = np.concatenate([zero, np.cumsum(e_sorted)])
    ns = np.searchsorted(s_sorted, bounds, side="left")
    ne = np.searchsorted(e_sorted, bounds, side="left")
    return bounds * ns - s_pref[ns] - bounds * ne + e_pref[ne]


def check_deadlines(ts: TaskSet, trace: SimulationTrace) -> DeadlineReport:
    """Service received by each task in every quantized-period window of [0, Tc).

    A window passes when the task receives exactly its wcet inside it. Since
    ``T'_i <= T_i`` this also certifies the original deadlines.
    """
    D = trace.scale
    met = True
    out: List[TaskService] = []
    for i, task in enumerate(ts.tasks):
        try:
            tq = quantize_period(task.period, trace.L)
        except ValueError:
            met = False
            continue
        n_win = trace.Tc // tq if trace.Tc > 0 else 0
        if n_win == 0 or trace.Tc % tq:
            met = False
        mask = trace.task == i
        st, en = trace.start[mask], trace.end[mask]
        bounds = (np.arange(n_win + 1, dtype=np.int64) * (tq * D)).astype(st.dtype)
        served = np.diff(_cumulative_service(st, en, bounds)) if n_win else bounds[:0]
        # completion: latest end inside each window, if any
        ends = np.sort(en)
        idx = np.searchsorted(ends, bounds[1:], side="right") - 1
        completion = []
        for m, k in enumerate(idx):
            if k >= 0 and ends[k] > bounds[m]:
                completion.append(Fraction(int(ends[k]), D))
            else:
                completion.append(None)
        service = [Fraction(int(x), D) for x in served]
        ok = TaskService(i, task.wcet, tq, n_win, service, completion)
        met = met and ok.met
        out.append(ok)
    return DeadlineReport(met, out)


def verify_schedule(sched: CyclicSchedule, max_events: int = MAX_EVENTS) -> VerificationReport:
    """simulate, verify_conditions and check_deadlines in one call."""
    trace = simulate(sched, max_events)
    report = verify_conditions(sched, trace)
    dl = check_deadlines(sched.task_set, trace)
    report.deadlines_met = dl.met
    report.deadline_report = dl
    return report
