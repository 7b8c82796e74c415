"""Surrogate set functions for the organic subproblem.

Elements are (product, slot) pairs over the organic pool.  For a set U
with base weight w0' the utility is

    l(U) = sum_i r_i * omega(U, i) / (w0' + sum_j omega(U, j))

where omega(U, i) is the best weight among i's elements in U, and
h(U) = max over subsets X of U of l(X).  The subset maximization has a
revenue-threshold optimum: keeping exactly the elements whose product
revenue reaches the optimal value is optimal, so h is computable by
scanning the distinct revenues in descending order.  Capping h at a
revenue threshold yields the monotone submodular objective the greedy
maximizer works on.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import ProductNotInSet, ValidationError
from .model import Instance, ProductId, PositionId


class Element(NamedTuple):
    product: ProductId
    position: PositionId


@dataclass(frozen=True)
class ElementSet:
    """Set of organic (product, slot) elements scored against w0_prime."""

    inst: Instance
    elements: frozenset[Element]
    w0_prime: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "elements", frozenset(Element(*e) for e in self.elements))
        if self.w0_prime < self.inst.w0:
            raise ValidationError(
                f"w0_prime {self.w0_prime} is below the instance w0 {self.inst.w0}")
        for e in self.elements:
            if e.product not in self.inst.organic:
                raise ValidationError(f"element references non-organic product {e.product}")
            if e.position not in self.inst.organic_positions:
                raise ValidationError(f"element references non-organic slot {e.position}")

    @classmethod
    def ground(cls, inst: Instance, w0_prime: float,
               min_revenue: float = 0.0) -> "ElementSet":
        """Every organic (product, slot) pair whose revenue reaches
        min_revenue."""
        elems = {Element(i, t)
                 for i in inst.organic if inst.revenue[i] >= min_revenue
                 for t in inst.organic_positions}
        return cls(inst, frozenset(elems), w0_prime)

    def with_elements(self, elements: Iterable[Element]) -> "ElementSet":
        return ElementSet(self.inst, frozenset(elements), self.w0_prime)

    def products(self) -> frozenset[ProductId]:
        return frozenset(e.product for e in self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: Element) -> bool:
        return e in self.elements


@dataclass(frozen=True)
class SurrogateObjective:
    """Cap applied to h; the cap equals the current revenue guess."""

    r_threshold: float


def effective_weight(U: ElementSet, product: ProductId) -> float:
    """omega(U, i): the largest weight among i's elements in U."""
    ws = [U.inst.w(e.product, e.position) for e in U.elements if e.product == product]
    if not ws:
        raise ProductNotInSet(f"product {product} has no element in the set")
    return max(ws)


def _omega_by_product(U: ElementSet) -> dict[ProductId, float]:
    best: dict[ProductId, float] = {}
    for e in U.elements:
        w = U.inst.w(e.product, e.position)
        if w > best.get(e.product, -1.0):
            best[e.product] = w
    return best


def set_utility(U: ElementSet) -> float:
    """l(U); the empty set scores 0."""
    omega = _omega_by_product(U)
    num = sum(U.inst.revenue[i] * w for i, w in omega.items())
    den = U.w0_prime + sum(omega.values())
    return num / den


def best_subset(U: ElementSet) -> tuple[ElementSet, float]:
    """Maximize l over subsets of U; returns (X, l_star) with l(X) = h(U).

    Only revenue-threshold subsets need checking, so the scan walks the
    distinct revenues in descending order.  Ties keep the largest
    threshold (smallest set); when every subset scores 0 the empty set
    wins.
    """
    revs = sorted({U.inst.revenue[e.product] for e in U.elements}, reverse=True)
    best_set = U.with_elements(())
    best_val = 0.0
    for r in revs:
        X = U.with_elements(
            e for e in U.elements if U.inst.revenue[e.product] >= r)
        val = set_utility(X)
        if val > best_val:
            best_set, best_val = X, val
    return best_set, best_val


def surrogate_value(U: ElementSet, obj: SurrogateObjective) -> float:
    """min(h(U), r_threshold); monotone and submodular whenever every
    product in the ground set has revenue >= r_threshold."""
    _, h = best_subset(U)
    return min(h, obj.r_threshold)
