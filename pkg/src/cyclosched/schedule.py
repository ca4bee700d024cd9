"""Static cyclic timetables for a chosen base period.

Every task contributes one block to every RT cycle of length L. Task i with
``k_i = floor(T_i / L)`` is cut into k_i equal blocks of ``wcet_i / k_i`` time
units, so a full job completes once per quantized period ``T'_i = k_i * L``.
Inside a cycle the blocks are packed back to back from time 0, shortest
quantized period first, and whatever remains of L is the free interval.
The timetable repeats with the hyperperiod ``lcm(k_1..k_M) * L``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import List, NamedTuple, Sequence

from cyclosched.errors import HyperperiodOverflow, InfeasibleBasePeriod, ParseError
from cyclosched.objective import objective
from cyclosched.taskset import (
    TaskSet, rational_from_json, rational_to_json, task_set_from_dict,
    task_set_to_dict)

# Largest hyperperiod we agree to expand; matches a signed 64-bit timer.
MAX_HYPERPERIOD = 2 ** 63 - 1


@dataclass(frozen=True)
class BlockPlan:
    task_index: int
    k: int
    block_len: Fraction

    @property
    def delta(self) -> Fraction:
        """Share of the job executed per cycle."""
        return Fraction(1, self.k)


class Slot(NamedTuple):
    task_index: int
    start: Fraction
    end: Fraction


class TimedBlock(NamedTuple):
    cycle: int
    task_index: int
    start: Fraction
    end: Fraction


@dataclass
class CyclicSchedule:
    L: int
    plans: List[BlockPlan]
    cycle_order: List[Slot]
    free_interval: Fraction
    hyperperiod_Tc: int
    task_set: TaskSet
    notes: List[str] = field(default_factory=list)

    @property
    def n_cycles(self) -> int:
        return self.hyperperiod_Tc // self.L if self.L > 0 else 0

    @property
    def integral_blocks(self) -> bool:
        return all(p.block_len.denominator == 1 for p in self.plans)

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "Tc": self.hyperperiod_Tc,
            "n_cycles": self.n_cycles,
            "free_interval": rational_to_json(self.free_interval),
            "tasks": [{"task_index": p.task_index, "k": p.k,
                       "block_len": rational_to_json(p.block_len)}
                      for p in self.plans],
            "cycle_order": [{"task_index": s.task_index,
                             "start": rational_to_json(s.start),
                             "end": rational_to_json(s.end)}
                            for s in self.cycle_order],
            "task_set": task_set_to_dict(self.task_set),
            "notes": list(self.notes),
        }


def schedule_from_dict(doc) -> CyclicSchedule:
    """Rebuild a schedule from :meth:`CyclicSchedule.to_dict` output.

    The document is taken at face value; nothing is re-derived, so a tampered
    file reaches the verifier as written.
    """
    try:
        ts = task_set_from_dict(doc["task_set"])
        plans = [BlockPlan(int(t["task_index"]), int(t["k"]),
                           rational_from_json(t["block_len"], "block_len"))
                 for t in doc["tasks"]]
        order = [Slot(int(s["task_index"]), rational_from_json(s["start"], "start"),
                      rational_from_json(s["end"], "end"))
                 for s in doc["cycle_order"]]
        return CyclicSchedule(
            L=int(doc["L"]), plans=plans, cycle_order=order,
            free_interval=rational_from_json(doc["free_interval"], "free_interval"),
            hyperperiod_Tc=int(doc["Tc"]), task_set=ts,
            notes=list(doc.get("notes", [])))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"schedule document: {exc!r}") from None


def hyperperiod(ks: Sequence[int], L: int, limit: int = MAX_HYPERPERIOD) -> int:
    """``lcm(ks) * L``; raises :class:`HyperperiodOverflow` above ``limit``."""
    if not ks:
        raise ValueError("hyperperiod of an empty list")
    tc = reduce(lambda a, b: a * b // math.gcd(a, b), ks) * L
    if tc > limit:
        raise HyperperiodOverflow(f"hyperperiod {tc} exceeds {limit}")
    return tc


def build_schedule(ts: TaskSet, L: int) -> CyclicSchedule:
    """Slice every task into equal per-cycle blocks and pack one cycle.

    Raises:
        InfeasibleBasePeriod: quantized utilization exceeds 1, so the blocks
            would not fit into L.
    """
    ob = objective(ts, L)
    if ob.quantized_utilization > 1:
        raise InfeasibleBasePeriod(
            f"L={L}: quantized utilization {ob.quantized_utilization} > 1")

    plans = [BlockPlan(i, k, Fraction(t.wcet, k))
             for i, (t, k) in enumerate(zip(ts.tasks, ob.k))]
    # shortest quantized period first; sorted() keeps index order on ties
    order = sorted(range(ts.M), key=lambda i: ob.quantized_periods[i])
    slots = []
    t = Fraction(0)
    for i in order:
        slots.append(Slot(i, t, t + plans[i].block_len))
        t += plans[i].block_len

    sched = CyclicSchedule(
        L=L, plans=plans, cycle_order=slots, free_interval=L - t,
        hyperperiod_Tc=hyperperiod(ob.k, L), task_set=ts)
    if not sched.integral_blocks:
        sched.notes.append("some block lengths are not integers")
    if not ob.feasible:
        sched.notes.append(f"F(L) = {ob.f} >= 1: switching overhead not covered")
    return sched


def expand_timeline(sched: CyclicSchedule) -> List[TimedBlock]:
    """All blocks over [0, Tc), cycle by cycle."""
    return [TimedBlock(j, s.task_index, s.start + j * sched.L, s.end + j * sched.L)
            for j in range(sched.n_cycles) for s in sched.cycle_order]


_GLYPHS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"


def render_gantt(sched: CyclicSchedule, max_width: int = 120) -> str:
    """Plain-text timetable, one line per RT cycle.

    Each character covers ``1/res`` time units where ``res`` is the smallest
    resolution making every block boundary land on a character, capped so a
    line fits ``max_width``. Free time is drawn as ``.``.
    """
    bounds = [b for s in sched.cycle_order for b in (s.start, s.end)]
    res = reduce(lambda a, b: a * b // math.gcd(a, b),
                 (Fraction(b).denominator for b in bounds), 1)
    res = max(1, min(res, max_width // max(sched.L, 1)))
    width = sched.L * res
    line = ["."] * width
    for s in sched.cycle_order:
        a = math.floor(s.start * res)
        b = math.ceil(s.end * res)
        for c in range(max(a, 0), min(b, width)):
            line[c] = _GLYPHS[s.task_index % len(_GLYPHS)]
    row = "".join(line)
    pad = len(str(sched.hyperperiod_Tc))
    lines = [f"L={sched.L} Tc={sched.hyperperiod_Tc} cycles={sched.n_cycles} "
             f"free={sched.free_interval} ({res} char/unit)"]
    for j in range(sched.n_cycles):
        lo = j * sched.L
        lines.append(f"{j:>{len(str(sched.n_cycles))}} "
                     f"[{lo:>{pad}},{lo + sched.L:>{pad}}) |{row}|")
    return "\n".join(lines)
