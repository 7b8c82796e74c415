"""Approximation pipeline for the constrained placement problem.

Two candidates are built and the better one returned.  Candidate one
shows only the sponsored products, solved exactly.  Candidate two fixes
the sponsored products into their cheapest (minimum total weight)
reserved assignment, folds that weight into a shifted base weight w0',
and fills the organic slots by maximizing the capped surrogate over
every revenue guess: for each distinct organic revenue r the ground set
keeps the (product, slot) pairs with revenue at least r, the surrogate
is capped at r, and the greedy portfolio runs; the best extraction
across guesses (and the no-organics fallback) wins.  With a maximizer
guarantee beta the pair of candidates is a beta/(beta+1) approximation,
so 1/4 end to end for the default 1/3 portfolio.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import InfeasibleSponsoredAssignment, NoPerfectMatching
from .exact import DEFAULT_TOLERANCE, solve_sponsored_only
from .matching import BipartiteGraph, min_weight_perfect_matching
from .model import Explicit, Instance, Placement, Unconstrained, expected_revenue, mnl_revenue
from .submodular import FeasibilitySystem, MaximizerResult, maximize
from .surrogate import Element, ElementSet, SurrogateObjective, best_subset


@dataclass(frozen=True)
class CandidateReport:
    placement: Placement
    revenue: float
    role: str
    diagnostics: dict[str, Any]


@dataclass(frozen=True)
class CombinedReport:
    best: CandidateReport
    candidates: tuple[CandidateReport, ...]
    beta_structural: float
    bound_factor: float


def candidate_one(inst: Instance, tolerance: float = DEFAULT_TOLERANCE) -> CandidateReport:
    """Sponsored products only; the organic slots stay empty."""
    pl, revenue = solve_sponsored_only(inst, tolerance)
    return CandidateReport(pl, revenue, "sponsored_only", {})


def min_weight_sponsored(inst: Instance) -> tuple[Placement, float]:
    """Cheapest perfect assignment of sponsored products to reserved
    slots, by total attraction weight."""
    edges = {(i, t): inst.w(i, t)
             for i in inst.sponsored for t in inst.valid_positions[i]}
    g = BipartiteGraph.build(inst.sponsored, inst.reserved_positions, edges)
    try:
        m = min_weight_perfect_matching(g)
    except NoPerfectMatching as exc:
        raise InfeasibleSponsoredAssignment(
            f"sponsored products cannot fill the reserved slots: {exc}") from exc
    pl = Placement.from_pairs((t, i) for i, t in m.pairs)
    return pl, m.total(g)


def _extract_placement(chosen: ElementSet) -> Placement:
    """Place each chosen product at its best-weight slot; within equal
    weights the lowest slot wins."""
    X, _ = best_subset(chosen)
    best: dict[int, tuple[float, int]] = {}
    for e in sorted(X.elements):
        w = X.inst.w(e.product, e.position)
        cur = best.get(e.product)
        if cur is None or w > cur[0]:
            best[e.product] = (w, e.position)
    return Placement.from_pairs((t, i) for i, (_, t) in best.items())


def _maximize_for_guess(inst: Instance, w0_prime: float, guess: float,
                        use_local_search: bool) -> MaximizerResult:
    obj = SurrogateObjective(guess)
    constraint = inst.organic_constraint
    if isinstance(constraint, Explicit):
        # per feasible product set the slot matroid is the only
        # constraint left, so solve each maximal set and keep the best
        maximal = [s for s in constraint.feasible
                   if not any(s < other for other in constraint.feasible)]
        sys = FeasibilitySystem(None)
        best: MaximizerResult | None = None
        for allowed in sorted(maximal, key=lambda s: sorted(s)):
            ground = ElementSet(
                inst,
                frozenset(Element(i, t)
                          for i in allowed if inst.revenue[i] >= guess
                          for t in inst.organic_positions),
                w0_prime)
            res = maximize(ground, obj, sys, use_local_search)
            if best is None or res.value > best.value:
                best = res
        assert best is not None  # the family always contains the empty set
        return best
    second = None if isinstance(constraint, Unconstrained) else constraint
    ground = ElementSet.ground(inst, w0_prime, min_revenue=guess)
    return maximize(ground, obj, FeasibilitySystem(second), use_local_search)


def candidate_two(inst: Instance, use_local_search: bool = False) -> CandidateReport:
    """Cheapest sponsored assignment plus surrogate-optimized organics."""
    base_pl, base_weight = min_weight_sponsored(inst)
    w0_prime = inst.w0 + base_weight
    best_organic = Placement.empty()
    best_f_prime = 0.0
    best_diag: dict[str, Any] = {"guess": None, "method": "skip_organics",
                                 "surrogate_value": 0.0, "guarantee_beta": None}
    # larger guesses first, so equal f' keeps the larger guess
    for guess in sorted({inst.revenue[i] for i in inst.organic}, reverse=True):
        res = _maximize_for_guess(inst, w0_prime, guess, use_local_search)
        organic_pl = _extract_placement(res.chosen)
        f_prime = mnl_revenue(inst, organic_pl, w0_prime)
        if f_prime > best_f_prime:
            best_organic = organic_pl
            best_f_prime = f_prime
            best_diag = {"guess": guess, "method": res.method,
                         "surrogate_value": res.value,
                         "guarantee_beta": res.guarantee_beta}
    combined = base_pl.merge(best_organic)
    diagnostics = dict(best_diag)
    diagnostics.update({
        "w0_prime": w0_prime,
        "sponsored_weight": base_weight,
        "f_prime": best_f_prime,
        "organic_pairs": best_organic.pairs,
    })
    return CandidateReport(combined, expected_revenue(inst, combined),
                           "min_weight_plus_organics", diagnostics)


def _structural_beta(inst: Instance) -> float:
    constraint = inst.organic_constraint
    if isinstance(constraint, (Unconstrained, Explicit)):
        return 0.5
    return FeasibilitySystem(constraint).guarantee()


def solve_constrained(inst: Instance, tolerance: float = DEFAULT_TOLERANCE,
                      use_local_search: bool = False) -> CombinedReport:
    """Run both candidates and return the better placement.

    The reported bound factor beta/(beta+1) uses the structural
    guarantee of the surrogate maximizer for the instance's constraint
    family, not a measured ratio.
    """
    first = candidate_one(inst, tolerance)
    second = candidate_two(inst, use_local_search)
    best = first if first.revenue >= second.revenue else second
    beta = _structural_beta(inst)
    return CombinedReport(best, (first, second), beta, beta / (beta + 1.0))
