"""Problem data and the position-dependent MNL objective.

An instance holds two disjoint product pools (organic and sponsored), a
slot layout split into organic and reserved positions, attraction
weights w(i, t) per product/slot pair, and the no-purchase weight w0.
A placement assigns products to slots injectively; the expected revenue
of a placement is

    f(pl) = sum_i r_i * w(i, t_i) / (w0 + sum_j w(j, t_j))

over the placed products.  Sponsored products may only sit in their own
valid subset of the reserved slots, organics only in organic slots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    InvalidPlacement,
    ProductNotPlaced,
    ValidationError,
)

ProductId = int
PositionId = int


# ---------------------------------------------------------------------------
# organic assortment constraints
# ---------------------------------------------------------------------------


class ConstraintFamily:
    """Downward-closed family of allowed organic product sets."""

    def allows(self, products: frozenset[ProductId]) -> bool:
        raise NotImplementedError

    def validate(self, organic: frozenset[ProductId]) -> None:
        """Check internal consistency against the organic pool."""


@dataclass(frozen=True)
class Unconstrained(ConstraintFamily):
    def allows(self, products: frozenset[ProductId]) -> bool:
        return True


@dataclass(frozen=True)
class Cardinality(ConstraintFamily):
    max_products: int

    def allows(self, products: frozenset[ProductId]) -> bool:
        return len(products) <= self.max_products

    def validate(self, organic: frozenset[ProductId]) -> None:
        if self.max_products < 0:
            raise ValidationError("cardinality bound must be >= 0")


@dataclass(frozen=True)
class Knapsack(ConstraintFamily):
    cost: Mapping[ProductId, float]
    capacity: float

    def allows(self, products: frozenset[ProductId]) -> bool:
        return sum(self.cost[i] for i in products) <= self.capacity + 1e-12

    def validate(self, organic: frozenset[ProductId]) -> None:
        if self.capacity < 0:
            raise ValidationError("knapsack capacity must be >= 0")
        missing = organic - set(self.cost)
        if missing:
            raise ValidationError(
                f"knapsack cost missing for organic products {sorted(missing)}")
        for i, c in self.cost.items():
            if not math.isfinite(c) or c < 0:
                raise ValidationError(f"knapsack cost for product {i} must be finite and >= 0")


@dataclass(frozen=True)
class PartitionMatroid(ConstraintFamily):
    # group label per organic product, capacity per label
    groups: Mapping[ProductId, str]
    caps: Mapping[str, int]

    def allows(self, products: frozenset[ProductId]) -> bool:
        counts: dict[str, int] = {}
        for i in products:
            g = self.groups[i]
            counts[g] = counts.get(g, 0) + 1
        return all(n <= self.caps[g] for g, n in counts.items())

    def validate(self, organic: frozenset[ProductId]) -> None:
        missing = organic - set(self.groups)
        if missing:
            raise ValidationError(
                f"partition group missing for organic products {sorted(missing)}")
        for g in set(self.groups.values()):
            if g not in self.caps:
                raise ValidationError(f"partition cap missing for group {g!r}")
        for g, cap in self.caps.items():
            if cap < 0:
                raise ValidationError(f"partition cap for group {g!r} must be >= 0")


@dataclass(frozen=True)
class Explicit(ConstraintFamily):
    feasible: frozenset[frozenset[ProductId]]

    def allows(self, products: frozenset[ProductId]) -> bool:
        return products in self.feasible

    def validate(self, organic: frozenset[ProductId]) -> None:
        if not self.feasible:
            raise ValidationError("explicit constraint lists no feasible set")
        for s in self.feasible:
            extra = s - organic
            if extra:
                raise ValidationError(
                    f"explicit feasible set references non-organic products {sorted(extra)}")
            for i in s:
                if s - {i} not in self.feasible:
                    raise ValidationError(
                        "explicit constraint is not downward closed: "
                        f"{sorted(s)} feasible but {sorted(s - {i})} is not")


UNCONSTRAINED = Unconstrained()


# ---------------------------------------------------------------------------
# instance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """Immutable problem instance; validated on construction.

    Parameters
    ----------
    organic, sponsored : iterable of product ids, disjoint.
    revenue : per-product revenue, >= 0, covering every product.
    weight : attraction weight per (product, slot) pair; missing pairs
        default to 0.
    w0 : no-purchase weight, > 0.
    organic_positions, reserved_positions : slot ids; together they must
        form the contiguous range 1..k.
    valid_positions : for each sponsored product, the nonempty subset of
        reserved slots it may occupy.
    organic_constraint : downward-closed family of allowed organic sets.
    """

    organic: frozenset[ProductId]
    sponsored: frozenset[ProductId]
    revenue: Mapping[ProductId, float]
    weight: Mapping[tuple[ProductId, PositionId], float]
    w0: float
    organic_positions: frozenset[PositionId]
    reserved_positions: frozenset[PositionId]
    valid_positions: Mapping[ProductId, frozenset[PositionId]]
    organic_constraint: ConstraintFamily = field(default=UNCONSTRAINED)

    def __post_init__(self) -> None:
        object.__setattr__(self, "organic", frozenset(self.organic))
        object.__setattr__(self, "sponsored", frozenset(self.sponsored))
        object.__setattr__(self, "organic_positions", frozenset(self.organic_positions))
        object.__setattr__(self, "reserved_positions", frozenset(self.reserved_positions))
        object.__setattr__(
            self, "valid_positions",
            {i: frozenset(ts) for i, ts in self.valid_positions.items()})
        self._validate()

    def _validate(self) -> None:
        if self.organic & self.sponsored:
            raise ValidationError(
                f"products {sorted(self.organic & self.sponsored)} are both organic and sponsored")
        if len(self.sponsored) != len(self.reserved_positions):
            raise ValidationError(
                f"need |sponsored| == |reserved positions|, got "
                f"{len(self.sponsored)} != {len(self.reserved_positions)}")
        slots = self.organic_positions | self.reserved_positions
        if self.organic_positions & self.reserved_positions:
            raise ValidationError("a slot cannot be both organic and reserved")
        if slots != frozenset(range(1, len(slots) + 1)):
            raise ValidationError(f"slots must form the range 1..k, got {sorted(slots)}")
        if not (math.isfinite(self.w0) and self.w0 > 0):
            raise ValidationError(f"w0 must be finite and > 0, got {self.w0}")
        for i in self.organic | self.sponsored:
            if i not in self.revenue:
                raise ValidationError(f"revenue missing for product {i}")
        for i, r in self.revenue.items():
            if not math.isfinite(r) or r < 0:
                raise ValidationError(f"revenue for product {i} must be finite and >= 0")
        for (i, t), w in self.weight.items():
            if i not in self.organic and i not in self.sponsored:
                raise ValidationError(f"weight references unknown product {i}")
            if t not in slots:
                raise ValidationError(f"weight references unknown slot {t}")
            if not math.isfinite(w) or w < 0:
                raise ValidationError(f"weight for ({i}, {t}) must be finite and >= 0")
        if set(self.valid_positions) != set(self.sponsored):
            raise ValidationError("valid_positions must be keyed by exactly the sponsored products")
        for i, ts in self.valid_positions.items():
            if not ts:
                raise ValidationError(f"sponsored product {i} has no valid slots")
            if not ts <= self.reserved_positions:
                raise ValidationError(
                    f"valid slots for sponsored product {i} must be reserved, got {sorted(ts)}")
        self.organic_constraint.validate(self.organic)

    @property
    def n_positions(self) -> int:
        return len(self.organic_positions) + len(self.reserved_positions)

    def w(self, product: ProductId, slot: PositionId) -> float:
        return self.weight.get((product, slot), 0.0)


# ---------------------------------------------------------------------------
# placement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Placement:
    """Injective partial assignment of products to slots.

    Stored as (slot, product) pairs sorted by slot.  Build with
    :meth:`from_pairs`, which rejects duplicate slots or products.
    """

    pairs: tuple[tuple[PositionId, ProductId], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[PositionId, ProductId]]) -> "Placement":
        pairs = list(pairs)
        slots = [t for t, _ in pairs]
        products = [i for _, i in pairs]
        if len(set(slots)) != len(slots):
            raise InvalidPlacement("a slot appears more than once")
        if len(set(products)) != len(products):
            raise InvalidPlacement("a product appears more than once")
        return cls(tuple(sorted(pairs)))

    @classmethod
    def empty(cls) -> "Placement":
        return cls(())

    def merge(self, other: "Placement") -> "Placement":
        return Placement.from_pairs(self.pairs + other.pairs)

    def product_at(self, slot: PositionId) -> ProductId | None:
        for t, i in self.pairs:
            if t == slot:
                return i
        return None

    def position_of(self, product: ProductId) -> PositionId | None:
        for t, i in self.pairs:
            if i == product:
                return t
        return None

    def products(self) -> frozenset[ProductId]:
        return frozenset(i for _, i in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _validate_against(inst: Instance, pl: Placement) -> None:
    """Structural rules a placement must obey before it can be scored."""
    for t, i in pl.pairs:
        if i in inst.sponsored:
            if t not in inst.valid_positions[i]:
                raise InvalidPlacement(
                    f"sponsored product {i} at slot {t}, valid slots are "
                    f"{sorted(inst.valid_positions[i])}")
        elif i in inst.organic:
            if t not in inst.organic_positions:
                raise InvalidPlacement(f"organic product {i} at non-organic slot {t}")
        else:
            raise InvalidPlacement(f"placement references unknown product {i}")


def mnl_revenue(inst: Instance, pl: Placement, w0: float) -> float:
    """MNL revenue of a placement with an explicit base weight.

    Shared by the public objective and by the oracles, which score the
    organic-only subproblem against a shifted base weight.
    """
    num = 0.0
    den = w0
    for t, i in pl.pairs:
        w = inst.w(i, t)
        num += inst.revenue[i] * w
        den += w
    return num / den


def expected_revenue(inst: Instance, pl: Placement) -> float:
    """Expected revenue f(pl) of a structurally valid placement."""
    _validate_against(inst, pl)
    return mnl_revenue(inst, pl, inst.w0)


def choice_probability(inst: Instance, pl: Placement, product: ProductId) -> float:
    """Probability that `product` is chosen under the placement."""
    _validate_against(inst, pl)
    t = pl.position_of(product)
    if t is None:
        raise ProductNotPlaced(f"product {product} is not placed")
    den = inst.w0 + sum(inst.w(i, s) for s, i in pl.pairs)
    return inst.w(product, t) / den


@dataclass(frozen=True)
class FeasibilityVerdict:
    ok: bool
    violations: tuple[str, ...]


def check_feasible(inst: Instance, pl: Placement) -> FeasibilityVerdict:
    """Full feasibility check for the constrained problem.

    Reports every violated condition rather than stopping at the first,
    and never raises: garbage placements come back as verdicts.
    """
    violations: list[str] = []
    placed = pl.products()
    organic_placed = placed & inst.organic
    for t, i in pl.pairs:
        if i in inst.sponsored:
            if t not in inst.valid_positions[i]:
                violations.append(
                    f"sponsored product {i} at slot {t}, valid slots are "
                    f"{sorted(inst.valid_positions[i])}")
        elif i in inst.organic:
            if t not in inst.organic_positions:
                violations.append(f"organic product {i} at non-organic slot {t}")
        else:
            violations.append(f"unknown product {i}")
        if t not in inst.organic_positions and t not in inst.reserved_positions:
            violations.append(f"unknown slot {t}")
    for i in sorted(inst.sponsored - placed):
        violations.append(f"sponsored product {i} is not placed")
    if not inst.organic_constraint.allows(frozenset(organic_placed)):
        violations.append(
            f"organic set {sorted(organic_placed)} violates the assortment constraint")
    return FeasibilityVerdict(not violations, tuple(violations))
