"""Greedy maximization of the capped surrogate objective.

The feasible sets are intersections of the slot matroid (at most one
element per organic slot) with an optional product-level constraint.
For matroid-style second constraints the plain greedy carries the
classical 1/(k+1) factor, so 1/2 with the slot matroid alone and 1/3
with a partition or cardinality constraint on top.  A knapsack second
constraint gets a portfolio instead: plain gain greedy, gain-per-cost
greedy, and the best feasible singleton; the reported 1/3 floor for
that portfolio is validated empirically by the acceptance suite rather
than proven.

All routines are deterministic: equal priorities resolve toward the
lowest (product, position) pair.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import GroundSetTooLarge, ValidationError
from .model import Cardinality, ConstraintFamily, Explicit, Knapsack, PartitionMatroid
from .surrogate import Element, ElementSet, SurrogateObjective, surrogate_value

BRUTE_FORCE_CAP = 20
LOCAL_SEARCH_EPS = 0.01


@dataclass(frozen=True)
class FeasibilitySystem:
    """Slot matroid plus an optional product-level second constraint.

    Explicit families are not accepted here; the constrained solver
    decomposes them into per-set subproblems before calling maximize.
    """

    second: ConstraintFamily | None = None

    def __post_init__(self) -> None:
        if isinstance(self.second, Explicit):
            raise ValidationError(
                "explicit families must be decomposed before greedy maximization")

    def is_feasible(self, elements: frozenset[Element]) -> bool:
        slots = [e.position for e in elements]
        if len(set(slots)) != len(slots):
            return False
        if self.second is None:
            return True
        return self.second.allows(frozenset(e.product for e in elements))

    def can_add(self, elements: frozenset[Element], e: Element) -> bool:
        return e not in elements and self.is_feasible(elements | {e})

    def guarantee(self) -> float:
        if self.second is None:
            return 0.5
        return 1.0 / 3.0


@dataclass(frozen=True)
class MaximizerResult:
    chosen: ElementSet
    value: float
    guarantee_beta: float
    method: str


def _cost_of(second: ConstraintFamily | None, current: frozenset[Element],
             e: Element) -> float:
    """Marginal knapsack cost of adding e; a product already present
    costs nothing again."""
    if not isinstance(second, Knapsack):
        return 1.0
    if any(x.product == e.product for x in current):
        return 0.0
    return second.cost[e.product]


def _greedy(ground: ElementSet, obj: SurrogateObjective, sys: FeasibilitySystem,
            by_density: bool) -> tuple[ElementSet, float]:
    """Lazy greedy; priorities are marginal gains, or gains per marginal
    cost when by_density is set."""

    def priority(gain: float, cost: float) -> float:
        if not by_density or gain <= 0.0:
            return gain
        if cost <= 0.0:
            return math.inf
        return gain / cost

    current: frozenset[Element] = frozenset()
    cur_set = ground.with_elements(())
    cur_val = 0.0
    heap: list[tuple[float, int, int, int]] = []
    for e in sorted(ground.elements):
        gain = surrogate_value(ground.with_elements({e}), obj)
        pri = priority(gain, _cost_of(sys.second, current, e))
        heapq.heappush(heap, (-pri, e.product, e.position, 0))
    while heap:
        neg_pri, prod, pos, stamp = heapq.heappop(heap)
        e = Element(prod, pos)
        if not sys.can_add(current, e):
            continue                      # can never become feasible again
        if stamp != len(current):
            cand = ground.with_elements(current | {e})
            gain = surrogate_value(cand, obj) - cur_val
            pri = priority(gain, _cost_of(sys.second, current, e))
            heapq.heappush(heap, (-pri, prod, pos, len(current)))
            continue
        if -neg_pri <= 0.0:
            break                         # diminishing returns: nobody can help
        current = current | {e}
        cur_set = ground.with_elements(current)
        cur_val = surrogate_value(cur_set, obj)
    return cur_set, cur_val


def _best_singleton(ground: ElementSet, obj: SurrogateObjective,
                    sys: FeasibilitySystem) -> tuple[ElementSet, float]:
    best_set = ground.with_elements(())
    best_val = 0.0
    for e in sorted(ground.elements):
        if not sys.is_feasible(frozenset({e})):
            continue
        val = surrogate_value(ground.with_elements({e}), obj)
        if val > best_val:
            best_set, best_val = ground.with_elements({e}), val
    return best_set, best_val


def _local_search(start: ElementSet, value: float, ground: ElementSet,
                  obj: SurrogateObjective, sys: FeasibilitySystem,
                  max_rounds: int = 50) -> tuple[ElementSet, float]:
    """First-improvement add/swap search; a move must beat the incumbent
    by the relative factor LOCAL_SEARCH_EPS."""
    current = frozenset(start.elements)
    cur_val = value
    outside = sorted(set(ground.elements) - current)
    for _ in range(max_rounds):
        improved = False
        for e in outside:
            trials = []
            if sys.can_add(current, e):
                trials.append(current | {e})
            for d in sorted(current):
                cand = (current - {d}) | {e}
                if sys.is_feasible(cand):
                    trials.append(cand)
            for cand in trials:
                val = surrogate_value(ground.with_elements(cand), obj)
                if val >= cur_val * (1.0 + LOCAL_SEARCH_EPS) and val > cur_val:
                    current, cur_val = cand, val
                    outside = sorted(set(ground.elements) - current)
                    improved = True
                    break
            if improved:
                break
        if not improved:
            break
    return ground.with_elements(current), cur_val


def maximize(ground: ElementSet, obj: SurrogateObjective, sys: FeasibilitySystem,
             use_local_search: bool = False) -> MaximizerResult:
    """Best of the greedy portfolio for the capped surrogate objective.

    Runs gain greedy always; with a knapsack second constraint also the
    gain-per-cost greedy and the best feasible singleton.  Local search
    refinement is opt-in and skipped for knapsack constraints.
    """
    candidates: list[tuple[str, ElementSet, float]] = []
    g_set, g_val = _greedy(ground, obj, sys, by_density=False)
    candidates.append(("greedy", g_set, g_val))
    if isinstance(sys.second, Knapsack):
        d_set, d_val = _greedy(ground, obj, sys, by_density=True)
        candidates.append(("density_greedy", d_set, d_val))
        s_set, s_val = _best_singleton(ground, obj, sys)
        candidates.append(("best_singleton", s_set, s_val))
    method, best_set, best_val = candidates[0]
    for m, s, v in candidates[1:]:
        if v > best_val:
            method, best_set, best_val = m, s, v
    if use_local_search and not isinstance(sys.second, Knapsack):
        ls_set, ls_val = _local_search(best_set, best_val, ground, obj, sys)
        if ls_val > best_val:
            method, best_set, best_val = "local_search", ls_set, ls_val
    return MaximizerResult(best_set, best_val, sys.guarantee(), method)


def brute_force_maximize(ground: ElementSet, obj: SurrogateObjective,
                         sys: FeasibilitySystem) -> MaximizerResult:
    """Exact maximum by depth-first enumeration of feasible subsets.

    Refuses ground sets larger than BRUTE_FORCE_CAP elements.
    """
    elems = sorted(ground.elements)
    if len(elems) > BRUTE_FORCE_CAP:
        raise GroundSetTooLarge(
            f"{len(elems)} elements exceed the brute-force cap of {BRUTE_FORCE_CAP}")
    best_set = ground.with_elements(())
    best_val = surrogate_value(best_set, obj)

    def recurse(idx: int, acc: frozenset[Element]) -> None:
        nonlocal best_set, best_val
        if idx == len(elems):
            return
        recurse(idx + 1, acc)
        cand = acc | {elems[idx]}
        if not sys.is_feasible(cand):
            return
        val = surrogate_value(ground.with_elements(cand), obj)
        if val > best_val:
            best_set, best_val = ground.with_elements(cand), val
        recurse(idx + 1, cand)

    recurse(0, frozenset())
    return MaximizerResult(best_set, best_val, 1.0, "brute_force")
