"""Task-set generators and the step-count efficiency experiment.

Each run draws its instance from its own stream, seeded by ``(seed, run)``,
so reports are reproducible and independent of run order.
"""

import csv
import hashlib
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence

import numpy as np

from cyclosched.errors import NoFeasibleBasePeriod, RangeTooSmall
from cyclosched.optimizer import brute_force_steps, check_optimize
from cyclosched.taskset import (
    TaskSet, format_decimal, rational_to_json, task_set_to_dict,
    validate_task_set)

KINDS = ("random", "prime", "fibonacci")

# mean efficiencies reported for the original implementation, in percent
REFERENCE_EFFICIENCY = {"random": 38.87, "prime": 29.77, "fibonacci": 44.64}

COPRIME_DENSITY = 6 / math.pi ** 2


@dataclass(frozen=True)
class GeneratorConfig:
    kind: str = "random"
    M: int = 4
    period_min: int = 5
    period_max: int = 50
    start_index: int = 1
    seed: int = 0
    runs: int = 100
    overhead: Fraction = Fraction(1, 5)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.M < 1 or self.runs < 1 or self.period_min < 1:
            raise ValueError("M, runs and period_min must be >= 1")
        if self.period_max < self.period_min:
            raise ValueError("period_max < period_min")
        if self.kind == "fibonacci" and self.start_index < 3:
            raise ValueError("fibonacci start_index must be >= 3 (F(3) = 2)")
        if self.kind == "prime" and self.start_index < 1:
            raise ValueError("prime start_index is 1-based")


def run_rng(seed: int, run: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed & (2 ** 64 - 1), run])


def primes_from(index: int) -> Iterator[int]:
    """Primes starting with the ``index``-th one (1-based: 2 is the first)."""
    found = []
    for n in itertools.count(2):
        if all(n % p for p in found if p * p <= n):
            found.append(n)
            if len(found) >= index:
                yield n


def fibonacci_from(index: int) -> Iterator[int]:
    """Fibonacci numbers from F(index), with F(1) = F(2) = 1."""
    a, b = 1, 1
    for _ in range(index - 1):
        a, b = b, a + b
    while True:
        yield a
        a, b = b, a + b


def draw_wcets(periods: Sequence[int], rng: np.random.Generator) -> List[int]:
    """Uniform wcet in [1, max(1, T // M)], which keeps U <= 1 whenever T >= M.

    Periods shorter than M can still overshoot; the heaviest task is trimmed
    one unit at a time until U <= 1.
    """
    M = len(periods)
    wcets = [int(rng.integers(1, max(1, T // M), endpoint=True)) for T in periods]
    while sum(Fraction(c, T) for c, T in zip(wcets, periods)) > 1:
        heavy = max((i for i in range(M) if wcets[i] > 1),
                    key=lambda i: Fraction(wcets[i], periods[i]), default=None)
        if heavy is None:
            raise RangeTooSmall(f"periods {list(periods)} overload even with unit wcets")
        wcets[heavy] -= 1
    return wcets


def gen_random_instance(cfg: GeneratorConfig, run: int = 0) -> TaskSet:
    """M distinct periods drawn uniformly from [period_min, period_max]."""
    span = cfg.period_max - cfg.period_min + 1
    if span < cfg.M:
        raise RangeTooSmall(
            f"only {span} periods in [{cfg.period_min}, {cfg.period_max}] for M={cfg.M}")
    rng = run_rng(cfg.seed, run)
    periods = sorted(int(x) for x in
                     rng.choice(span, size=cfg.M, replace=False) + cfg.period_min)
    return validate_task_set(zip(draw_wcets(periods, rng), periods), cfg.overhead)


def gen_prime_instance(cfg: GeneratorConfig, run: int = 0) -> TaskSet:
    periods = list(itertools.islice(primes_from(cfg.start_index), cfg.M))
    rng = run_rng(cfg.seed, run)
    return validate_task_set(zip(draw_wcets(periods, rng), periods), cfg.overhead)


def gen_fibonacci_instance(cfg: GeneratorConfig, run: int = 0) -> TaskSet:
    periods = list(itertools.islice(fibonacci_from(cfg.start_index), cfg.M))
    rng = run_rng(cfg.seed, run)
    return validate_task_set(zip(draw_wcets(periods, rng), periods), cfg.overhead)


GENERATORS = {"random": gen_random_instance, "prime": gen_prime_instance,
              "fibonacci": gen_fibonacci_instance}


def generate(cfg: GeneratorConfig, run: int = 0) -> TaskSet:
    return GENERATORS[cfg.kind](cfg, run)


def coprime_pairs(periods: Sequence[int]):
    """(coprime, total) over unordered pairs of distinct positions."""
    pairs = list(itertools.combinations(periods, 2))
    return sum(math.gcd(a, b) == 1 for a, b in pairs), len(pairs)


def coprime_fraction(lo: int, hi: int, samples: int, seed: int = 0) -> float:
    """Share of coprime pairs among ``samples`` pairs drawn uniformly from [lo, hi]."""
    rng = np.random.default_rng(seed)
    a = rng.integers(lo, hi, size=samples, endpoint=True)
    b = rng.integers(lo, hi, size=samples, endpoint=True)
    return float(np.mean(np.gcd(a, b) == 1))


def digest(ts: TaskSet) -> str:
    blob = json.dumps(task_set_to_dict(ts), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class RunRecord:
    run: int
    digest: str
    M: int
    T1: int
    best_L: Optional[int]
    f: Optional[Fraction]
    steps_bf: int
    steps_bnb: int
    max_frontier: int

    @property
    def efficiency(self) -> Fraction:
        return 1 - Fraction(self.steps_bnb, self.steps_bf)


@dataclass
class EfficiencyReport:
    kind: str
    seed: Optional[int]
    records: List[RunRecord]
    coprime_pairs: int
    total_pairs: int
    mismatches: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def mean_efficiency(self) -> Fraction:
        if not self.records:
            return Fraction(0)
        return sum((r.efficiency for r in self.records), Fraction(0)) / len(self.records)

    @property
    def coprime_pair_fraction(self) -> Optional[Fraction]:
        if not self.total_pairs:
            return None
        return Fraction(self.coprime_pairs, self.total_pairs)

    def to_dict(self) -> dict:
        cpf = self.coprime_pair_fraction
        return {
            "kind": self.kind,
            "seed": self.seed,
            "runs": len(self.records),
            "mean_efficiency": rational_to_json(self.mean_efficiency),
            "reference_efficiency_percent": REFERENCE_EFFICIENCY.get(self.kind),
            "coprime_pair_fraction": None if cpf is None else rational_to_json(cpf),
            "coprime_density_reference": round(COPRIME_DENSITY, 6),
            "mismatches": self.mismatches,
            "metadata": self.metadata,
            "records": [{
                "run": r.run, "digest": r.digest, "M": r.M, "T1": r.T1,
                "best_L": r.best_L,
                "f": None if r.f is None else rational_to_json(r.f),
                "steps_bf": r.steps_bf, "steps_bnb": r.steps_bnb,
                "max_frontier": r.max_frontier,
                "efficiency": rational_to_json(r.efficiency),
            } for r in self.records],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["seed", "run", "M", "T1", "best_L", "steps_bf", "steps_bnb", "efficiency"])
        for r in self.records:
            w.writerow([self.seed, r.run, r.M, r.T1, "" if r.best_L is None else r.best_L,
                        r.steps_bf, r.steps_bnb, format_decimal(r.efficiency, 6)])
        return buf.getvalue()


def measure(ts: TaskSet, run: int = 0) -> RunRecord:
    """Run both optimizers on one instance; disagreement raises OracleMismatch."""
    try:
        bnb, _ = check_optimize(ts)
        best_L, f, steps, frontier = bnb.best_L, bnb.f, bnb.steps, bnb.max_frontier
    except NoFeasibleBasePeriod as exc:
        # both routes agree there is no answer; the search still did work
        best_L = f = None
        steps, frontier = exc.steps, exc.max_frontier
    return RunRecord(run, digest(ts), ts.M, ts.min_period, best_L, f,
                     brute_force_steps(ts), steps, frontier)


def run_experiment(instances: Iterable[TaskSet], kind: str = "custom",
                   seed: Optional[int] = None) -> EfficiencyReport:
    records = []
    cop = tot = 0
    for run, ts in enumerate(instances):
        records.append(measure(ts, run))
        c, t = coprime_pairs(ts.periods)
        cop += c
        tot += t
    return EfficiencyReport(kind, seed, records, cop, tot)


def efficiency_experiment(cfg: GeneratorConfig) -> EfficiencyReport:
    """Generate ``cfg.runs`` instances and compare B&B against brute force."""
    report = run_experiment((generate(cfg, r) for r in range(cfg.runs)),
                            cfg.kind, cfg.seed)
    report.metadata = {
        "M": cfg.M, "period_min": cfg.period_min, "period_max": cfg.period_max,
        "start_index": cfg.start_index,
        "overhead": rational_to_json(cfg.overhead),
        "wcet_distribution": "uniform integer in [1, max(1, T // M)]",
        "wcet_randomized": True,
        "step_unit": "one objective term added",
    }
    return report
