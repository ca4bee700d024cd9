"""Search for the base period L in [1, T1] that minimizes F(L).

Two routes are provided and must always agree exactly:

* :func:`brute_force_optimize` evaluates every L.
* :func:`bnb_optimize` runs a best-first branch and bound over a tree whose
  edges are single objective terms. The switching-cost chain V contributes
  ``M*p/T1`` at the root and then the increments ``M*p/(L*(L-1))`` as the
  search walks from L to L-1; each candidate L then adds its per-task growth
  terms (the H subset of L) largest first. Every partial sum is a lower bound
  on F for everything below it, so the first candidate to be extracted with
  all M terms added is optimal.

A "step" is one scalar term added to a partial objective. Brute force pays
``M + 1`` steps per L (M growth terms plus the switch term); branch and bound
pays one step per node it generates.
"""

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from cyclosched.errors import NoFeasibleBasePeriod, OracleMismatch
from cyclosched.objective import ObjectiveBreakdown, growth_terms, objective
from cyclosched.taskset import TaskSet, baseline_utilization, rational_to_json

SPINE = "spine"
CANDIDATE = "candidate"

TIE_RULE = "min cost; candidate before spine; larger L first"


@dataclass(frozen=True)
class HSubset:
    """Growth terms of one candidate L, largest first.

    ``elements[j] = (value, task_index)`` with task indices referring to the
    period-sorted task order.
    """
    L: int
    elements: Tuple[Tuple[Fraction, int], ...]

    @property
    def values(self) -> List[Fraction]:
        return [v for v, _ in self.elements]

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


@dataclass(frozen=True)
class VChain:
    v1: Fraction
    deltas: Dict[int, Fraction]  # L -> M*p/(L*(L-1)) for L = T1..2
    T1: int

    def cost_at(self, L: int) -> Fraction:
        """v1 plus every increment between T1 and L; telescopes to M*p/L."""
        return self.v1 + sum((self.deltas[j] for j in range(L + 1, self.T1 + 1)),
                             Fraction(0))


@dataclass
class SearchNode:
    kind: str
    L: int
    cost: Fraction
    consumed: int = 0
    f1_partial: Fraction = Fraction(0)

    def sort_key(self):
        return (self.cost, 0 if self.kind == CANDIDATE else 1, -self.L)


@dataclass
class OptimizationResult:
    best_L: int
    best: ObjectiveBreakdown
    table: List[ObjectiveBreakdown]
    steps: int
    method: str
    pruned: int = 0
    max_frontier: int = 0
    tie_rule: str = TIE_RULE

    @property
    def f(self) -> Fraction:
        return self.best.f

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "best_L": self.best_L,
            "f": rational_to_json(self.best.f),
            "best": self.best.to_dict(),
            "steps": self.steps,
            "pruned": self.pruned,
            "max_frontier": self.max_frontier,
            "tie_rule": self.tie_rule,
            "table": [row.to_dict() for row in self.table],
        }


def brute_force_steps(ts: TaskSet) -> int:
    return ts.min_period * (ts.M + 1)


def brute_force_optimize(ts: TaskSet) -> OptimizationResult:
    """Evaluate every L in [1, T1]; ties in F go to the larger L."""
    table = []
    best: Optional[ObjectiveBreakdown] = None
    for L in range(ts.min_period, 0, -1):
        row = objective(ts, L)
        table.append(row)
        # strict '<' while descending keeps the larger L on ties
        if row.feasible and (best is None or row.f < best.f):
            best = row
    if best is None:
        raise NoFeasibleBasePeriod(
            f"no L in [1, {ts.min_period}] has U' <= 1 and F < 1")
    return OptimizationResult(best.L, best, table, brute_force_steps(ts), "oracle")


def build_h_subset(ts: TaskSet, L: int) -> HSubset:
    terms = growth_terms(ts, L)
    order = sorted(range(ts.M), key=lambda i: (-terms[i], i))
    return HSubset(L, tuple((terms[i], i) for i in order))


def build_h_sets(ts: TaskSet) -> List[HSubset]:
    """One H subset per L, from L = T1 down to 1."""
    return [build_h_subset(ts, L) for L in range(ts.min_period, 0, -1)]


def build_v_chain(ts: TaskSet) -> VChain:
    mp = ts.M * ts.overhead
    T1 = ts.min_period
    return VChain(mp / T1, {L: mp / (L * (L - 1)) for L in range(T1, 1, -1)}, T1)


def bnb_optimize(ts: TaskSet, trace: Optional[list] = None) -> OptimizationResult:
    """Best-first branch and bound for the optimal base period.

    Args:
        ts: validated task set.
        trace: if given, receives ``(event, kind, L, cost, consumed)`` tuples
            for every ``"push"``, ``"pop"`` and ``"prune"``.

    Raises:
        NoFeasibleBasePeriod: the frontier emptied before any candidate was
            completed.
    """
    M = ts.M
    slack = 1 - baseline_utilization(ts)  # F1 above this means U' > 1
    chain = build_v_chain(ts)
    h_sets: Dict[int, HSubset] = {}
    evaluated: List[int] = []

    frontier: list = []
    tick = itertools.count()
    steps = 0
    pruned = 0
    max_frontier = 0

    def log(event, node):
        if trace is not None:
            trace.append((event, node.kind, node.L, node.cost, node.consumed))

    def push(node: SearchNode):
        nonlocal steps, pruned, max_frontier
        steps += 1
        if node.cost >= 1 or (node.kind == CANDIDATE and node.f1_partial > slack):
            pruned += 1
            log("prune", node)
            return
        log("push", node)
        heapq.heappush(frontier, (node.sort_key(), next(tick), node))
        max_frontier = max(max_frontier, len(frontier))

    def spawn_candidate(L: int, base: Fraction):
        # H subsets are built only when their candidate is first reached
        h = h_sets[L] = build_h_subset(ts, L)
        evaluated.append(L)
        first = h.elements[0][0]
        push(SearchNode(CANDIDATE, L, base + first, consumed=1, f1_partial=first))

    push(SearchNode(SPINE, ts.min_period, chain.v1))

    while frontier:
        _, _, node = heapq.heappop(frontier)
        log("pop", node)
        if node.kind == SPINE:
            spawn_candidate(node.L, node.cost)
            if node.L > 1:
                push(SearchNode(SPINE, node.L - 1, node.cost + chain.deltas[node.L]))
            continue
        if node.consumed == M:
            best = objective(ts, node.L)
            if best.f != node.cost:
                raise OracleMismatch(
                    f"search cost {node.cost} != F({node.L}) = {best.f}")
            table = [objective(ts, L) for L in evaluated]
            return OptimizationResult(node.L, best, table, steps, "bnb",
                                      pruned, max_frontier)
        value = h_sets[node.L].elements[node.consumed][0]
        push(SearchNode(CANDIDATE, node.L, node.cost + value,
                        consumed=node.consumed + 1,
                        f1_partial=node.f1_partial + value))

    exc = NoFeasibleBasePeriod(
        f"search exhausted: no L in [1, {ts.min_period}] has U' <= 1 and F < 1")
    exc.steps, exc.pruned, exc.max_frontier = steps, pruned, max_frontier
    raise exc


def optimize(ts: TaskSet, method: str = "bnb") -> OptimizationResult:
    if method == "bnb":
        return bnb_optimize(ts)
    if method == "oracle":
        return brute_force_optimize(ts)
    raise ValueError(f"unknown method {method!r}")


def check_optimize(ts: TaskSet) -> Tuple[OptimizationResult, OptimizationResult]:
    """Run both routes and raise :class:`OracleMismatch` unless they agree exactly.

    If one route finds no feasible L the other must fail too.
    """
    try:
        oracle = brute_force_optimize(ts)
    except NoFeasibleBasePeriod:
        try:
            got = bnb_optimize(ts)
        except NoFeasibleBasePeriod:
            raise
        raise OracleMismatch(f"bnb found L={got.best_L} but the oracle found none")
    try:
        bnb = bnb_optimize(ts)
    except NoFeasibleBasePeriod:
        raise OracleMismatch(
            f"oracle found L={oracle.best_L} but bnb found none") from None
    if (bnb.best_L, bnb.f) != (oracle.best_L, oracle.f):
        raise OracleMismatch(
            f"bnb (L={bnb.best_L}, F={bnb.f}) != oracle (L={oracle.best_L}, F={oracle.f})")
    return bnb, oracle


def count_steps(method: str, ts: TaskSet) -> int:
    """Search work of one run, in objective terms added."""
    if method == "oracle":
        return brute_force_steps(ts)
    return optimize(ts, method).steps
