"""Seeded random instance generator.

A configuration file is a JSON object:

    {
      "seed": 42,
      "n_organic": 5,
      "n_sponsored": 2,
      "k": 5,
      "revenue_range": [1.0, 10.0],
      "weight_range": [0.2, 2.0],
      "position_decay": 0.8,
      "w0": 1.0,
      "constraint": {"type": "cardinality", "max": 3}
    }

Constraint recipes: {"type": "none"}, {"type": "cardinality", "max": n},
{"type": "knapsack", "cost_range": [lo, hi], "capacity_fraction": f}
(capacity = f * total cost), {"type": "partition", "n_groups": g,
"cap_range": [lo, hi]}.

Each product draws an intrinsic attraction from weight_range; the
weight at slot t is that attraction times position_decay^(t-1), so a
decay of 1.0 gives position-independent weights per product.  Every
sponsored product's valid set contains one slot of a planted
permutation of the reserved slots, which keeps the sponsored assignment
feasible by construction.  Fixed seeds give identical instances.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .model import (
    Cardinality,
    ConstraintFamily,
    Instance,
    Knapsack,
    PartitionMatroid,
    UNCONSTRAINED,
)


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    n_organic: int = 4
    n_sponsored: int = 2
    k: int = 5
    revenue_range: tuple[float, float] = (1.0, 10.0)
    weight_range: tuple[float, float] = (0.2, 2.0)
    position_decay: float = 0.9
    w0: float = 1.0
    constraint: dict[str, Any] = field(default_factory=lambda: {"type": "none"})

    def __post_init__(self) -> None:
        for name in ("n_organic", "n_sponsored"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.k < self.n_sponsored:
            raise ConfigError(
                f"k={self.k} leaves no room for {self.n_sponsored} reserved slots")
        for name in ("revenue_range", "weight_range"):
            lo, hi = getattr(self, name)
            if not (0 <= lo <= hi):
                raise ConfigError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")
        if not (0.0 < self.position_decay <= 1.0):
            raise ConfigError(f"position_decay must be in (0, 1], got {self.position_decay}")
        if self.w0 <= 0:
            raise ConfigError(f"w0 must be > 0, got {self.w0}")
        if not isinstance(self.constraint, dict) or "type" not in self.constraint:
            raise ConfigError("constraint recipe needs a 'type' key")
        if self.constraint["type"] not in ("none", "cardinality", "knapsack",
                                           "partition"):
            raise ConfigError(
                f"unknown constraint recipe type {self.constraint['type']!r}")

    @classmethod
    def from_dict(cls, data: Any, where: str = "config") -> "GeneratorConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"{where}: expected a JSON object")
        known = {"seed", "n_organic", "n_sponsored", "k", "revenue_range",
                 "weight_range", "position_decay", "w0", "constraint"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
        kwargs = dict(data)
        for name in ("revenue_range", "weight_range"):
            if name in kwargs:
                pair = kwargs[name]
                if (not isinstance(pair, (list, tuple)) or len(pair) != 2
                        or any(not isinstance(x, (int, float)) for x in pair)):
                    raise ConfigError(f"{where}.{name}: expected [lo, hi]")
                kwargs[name] = (float(pair[0]), float(pair[1]))
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(f"{where}: {exc}") from exc

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return replace(self, seed=seed)


def load_config(path: str | Path) -> GeneratorConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return GeneratorConfig.from_dict(data, where=str(path))


def _recipe_constraint(recipe: dict[str, Any], organics: list[int],
                       rng: random.Random) -> ConstraintFamily:
    ctype = recipe["type"]
    if ctype == "none":
        return UNCONSTRAINED
    if ctype == "cardinality":
        if "max" not in recipe:
            raise ConfigError("cardinality recipe needs 'max'")
        return Cardinality(int(recipe["max"]))
    if ctype == "knapsack":
        lo, hi = recipe.get("cost_range", (1.0, 5.0))
        fraction = recipe.get("capacity_fraction", 0.5)
        cost = {i: rng.uniform(lo, hi) for i in organics}
        return Knapsack(cost, fraction * sum(cost.values()))
    if ctype == "partition":
        n_groups = int(recipe.get("n_groups", 2))
        lo, hi = recipe.get("cap_range", (1, 2))
        if n_groups < 1:
            raise ConfigError("partition recipe needs n_groups >= 1")
        labels = [f"g{q}" for q in range(n_groups)]
        groups = {i: labels[rng.randrange(n_groups)] for i in organics}
        caps = {lab: rng.randint(int(lo), int(hi)) for lab in labels}
        return PartitionMatroid(groups, caps)
    raise ConfigError(f"unknown constraint recipe type {ctype!r}")


def generate(cfg: GeneratorConfig) -> Instance:
    """Draw one instance; identical configs give identical instances."""
    rng = random.Random(cfg.seed)
    slots = list(range(1, cfg.k + 1))
    reserved = sorted(rng.sample(slots, cfg.n_sponsored))
    organic_pos = [t for t in slots if t not in reserved]
    organics = list(range(1, cfg.n_organic + 1))
    sponsoreds = list(range(cfg.n_organic + 1, cfg.n_organic + cfg.n_sponsored + 1))
    lo_r, hi_r = cfg.revenue_range
    revenue = {i: rng.uniform(lo_r, hi_r) for i in organics + sponsoreds}
    lo_w, hi_w = cfg.weight_range
    attraction = {i: rng.uniform(lo_w, hi_w) for i in organics + sponsoreds}
    weight: dict[tuple[int, int], float] = {}
    for i in organics:
        for t in organic_pos:
            weight[(i, t)] = attraction[i] * cfg.position_decay ** (t - 1)
    # a planted permutation keeps the reserved slots coverable
    planted = list(reserved)
    rng.shuffle(planted)
    valid_positions: dict[int, frozenset[int]] = {}
    for idx, i in enumerate(sponsoreds):
        extras = [t for t in reserved if rng.random() < 0.5]
        valid_positions[i] = frozenset({planted[idx], *extras})
        for t in sorted(valid_positions[i]):
            weight[(i, t)] = attraction[i] * cfg.position_decay ** (t - 1)
    constraint = _recipe_constraint(cfg.constraint, organics, rng)
    return Instance(
        organic=frozenset(organics),
        sponsored=frozenset(sponsoreds),
        revenue=revenue,
        weight=weight,
        w0=cfg.w0,
        organic_positions=frozenset(organic_pos),
        reserved_positions=frozenset(reserved),
        valid_positions=valid_positions,
        organic_constraint=constraint,
    )
