"""Exhaustive reference solvers for desk-scale instances.

Every oracle enumerates the full feasible space and keeps the first
strict maximum in a fixed iteration order, so outputs are deterministic
and independent of the solvers under test: the only shared code is the
model module's revenue evaluation.  A budget guard refuses instances
whose enumeration would not be desk-scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import BudgetExceeded, InfeasibleSponsoredAssignment
from .model import (
    ConstraintFamily,
    Instance,
    Placement,
    ProductId,
    PositionId,
    mnl_revenue,
)
from .surrogate import Element, ElementSet, SurrogateObjective


@dataclass(frozen=True)
class OracleBudget:
    max_products: int = 7
    max_positions: int = 6
    max_elements: int = 20


DEFAULT_BUDGET = OracleBudget()


def _check_instance_budget(inst: Instance, budget: OracleBudget) -> None:
    n_products = len(inst.organic) + len(inst.sponsored)
    if n_products > budget.max_products:
        raise BudgetExceeded(
            f"{n_products} products exceed the oracle budget of {budget.max_products}")
    if inst.n_positions > budget.max_positions:
        raise BudgetExceeded(
            f"{inst.n_positions} positions exceed the oracle budget of {budget.max_positions}")


def _sponsored_bijections(inst: Instance) -> Iterator[list[tuple[PositionId, ProductId]]]:
    """All assignments of every sponsored product to a distinct valid slot."""
    products = sorted(inst.sponsored)

    def recurse(idx: int, used: set[PositionId],
                acc: list[tuple[PositionId, ProductId]]) -> Iterator[list[tuple[PositionId, ProductId]]]:
        if idx == len(products):
            yield list(acc)
            return
        i = products[idx]
        for t in sorted(inst.valid_positions[i]):
            if t not in used:
                used.add(t)
                acc.append((t, i))
                yield from recurse(idx + 1, used, acc)
                acc.pop()
                used.remove(t)

    yield from recurse(0, set(), [])


def _organic_placements(
        inst: Instance,
        constraint: ConstraintFamily | None = None,
        ) -> Iterator[list[tuple[PositionId, ProductId]]]:
    """All partial injections of organics into organic slots.

    With a constraint, prunes on partial product sets; downward closure
    makes that safe.
    """
    products = sorted(inst.organic)
    slots = sorted(inst.organic_positions)

    def recurse(idx: int, used: set[PositionId], chosen: set[ProductId],
                acc: list[tuple[PositionId, ProductId]]) -> Iterator[list[tuple[PositionId, ProductId]]]:
        if idx == len(products):
            yield list(acc)
            return
        i = products[idx]
        yield from recurse(idx + 1, used, chosen, acc)
        if constraint is not None and not constraint.allows(frozenset(chosen | {i})):
            return
        for t in slots:
            if t not in used:
                used.add(t)
                chosen.add(i)
                acc.append((t, i))
                yield from recurse(idx + 1, used, chosen, acc)
                acc.pop()
                chosen.remove(i)
                used.remove(t)

    yield from recurse(0, set(), set(), [])


def enumeration_counts(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET,
                       ) -> tuple[int, int]:
    """(number of sponsored bijections, number of organic placements);
    a structural self-check hook for the enumerators."""
    _check_instance_budget(inst, budget)
    n_s = sum(1 for _ in _sponsored_bijections(inst))
    n_o = sum(1 for _ in _organic_placements(inst))
    return n_s, n_o


def oracle_p0(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET,
              ) -> tuple[Placement, float]:
    """Optimal placement ignoring the organic assortment constraint."""
    _check_instance_budget(inst, budget)
    best_pl: Placement | None = None
    best_rev = -1.0
    for sp in _sponsored_bijections(inst):
        for op in _organic_placements(inst):
            pl = Placement.from_pairs(sp + op)
            rev = mnl_revenue(inst, pl, inst.w0)
            if rev > best_rev:
                best_pl, best_rev = pl, rev
    if best_pl is None:
        raise InfeasibleSponsoredAssignment(
            "no assignment places every sponsored product in a valid slot")
    return best_pl, best_rev


def _revenue_split(inst: Instance, pl: Placement) -> tuple[float, float]:
    """Sponsored and organic shares of f(pl); they sum to f(pl)."""
    den = inst.w0 + sum(inst.w(i, t) for t, i in pl.pairs)
    part_sponsored = sum(
        inst.revenue[i] * inst.w(i, t) for t, i in pl.pairs if i in inst.sponsored) / den
    part_organic = sum(
        inst.revenue[i] * inst.w(i, t) for t, i in pl.pairs if i in inst.organic) / den
    return part_sponsored, part_organic


def oracle_p2(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET,
              ) -> tuple[Placement, float, float, float]:
    """Optimal constrained placement.

    Returns (placement, revenue, part_sponsored, part_organic) where the
    parts split the optimal revenue by product kind.
    """
    _check_instance_budget(inst, budget)
    best_pl: Placement | None = None
    best_rev = -1.0
    for sp in _sponsored_bijections(inst):
        for op in _organic_placements(inst, inst.organic_constraint):
            pl = Placement.from_pairs(sp + op)
            rev = mnl_revenue(inst, pl, inst.w0)
            if rev > best_rev:
                best_pl, best_rev = pl, rev
    if best_pl is None:
        raise InfeasibleSponsoredAssignment(
            "no assignment places every sponsored product in a valid slot")
    part_s, part_o = _revenue_split(inst, best_pl)
    return best_pl, best_rev, part_s, part_o


def oracle_p5(inst: Instance, w0_prime: float,
              budget: OracleBudget = DEFAULT_BUDGET) -> tuple[Placement, float]:
    """Best organic-only placement scored against the shifted base weight."""
    _check_instance_budget(inst, budget)
    best_pl = Placement.empty()
    best_rev = 0.0
    for op in _organic_placements(inst, inst.organic_constraint):
        pl = Placement.from_pairs(op)
        rev = mnl_revenue(inst, pl, w0_prime)
        if rev > best_rev:
            best_pl, best_rev = pl, rev
    return best_pl, best_rev


def oracle_p6(ground: ElementSet, obj: SurrogateObjective,
              is_feasible, budget: OracleBudget = DEFAULT_BUDGET,
              ) -> tuple[ElementSet, float]:
    """Maximize min(h(U), threshold) by enumerating every feasible subset.

    `is_feasible` is a predicate on frozensets of elements; it must
    describe a downward-closed system (enumeration prunes on it).
    """
    elems = sorted(ground.elements)
    if len(elems) > budget.max_elements:
        raise BudgetExceeded(
            f"{len(elems)} elements exceed the oracle budget of {budget.max_elements}")
    best_set = ground.with_elements(())
    best_val = min(0.0, obj.r_threshold)

    def recurse(idx: int, acc: list[Element]) -> None:
        nonlocal best_set, best_val
        if idx == len(elems):
            return
        recurse(idx + 1, acc)
        cand = acc + [elems[idx]]
        if not is_feasible(frozenset(cand)):
            return
        U = ground.with_elements(cand)
        val = min(exhaustive_h(U), obj.r_threshold)
        if val > best_val:
            best_set, best_val = U, val
        recurse(idx + 1, cand)

    recurse(0, [])
    return best_set, best_val


def exhaustive_h(U: ElementSet) -> float:
    """Exhaustive h(U): include/exclude depth-first over all 2^|U|
    subsets, independent of the threshold-scan shortcut.  Running
    per-product maxima keep each step O(1)."""
    inst = U.inst
    info = [(inst.revenue[i], inst.w(i, t), i) for (i, t) in sorted(U.elements)]
    omega: dict[ProductId, float] = {}
    best = 0.0

    def recurse(idx: int, num: float, den: float) -> None:
        nonlocal best
        if idx == len(info):
            val = num / (U.w0_prime + den)
            if val > best:
                best = val
            return
        recurse(idx + 1, num, den)          # element excluded
        r, w, i = info[idx]
        prev = omega.get(i)
        if prev is None or w > prev:
            omega[i] = w
            base = 0.0 if prev is None else prev
            recurse(idx + 1, num + r * (w - base), den + (w - base))
            if prev is None:
                del omega[i]
            else:
                omega[i] = prev
        else:
            recurse(idx + 1, num, den)      # included but shadowed
    recurse(0, 0.0, 0.0)
    return best
