"""Shared builders for randomized test instances."""
import itertools
import random

import pytest

from assortplan import (
    Cardinality,
    Explicit,
    Instance,
    Knapsack,
    PartitionMatroid,
    UNCONSTRAINED,
)


def random_instance(rng, constraint="none", max_organic=4, max_sponsored=2,
                    max_positions=5, min_organic=0, allow_zero_weights=False):
    """Instance with a feasible sponsored assignment planted by design."""
    n_s = rng.randint(0, max_sponsored)
    k = rng.randint(max(1, n_s), max_positions)
    n_o = rng.randint(min_organic, max_organic)
    slots = list(range(1, k + 1))
    rng.shuffle(slots)
    reserved = frozenset(slots[:n_s])
    organic_pos = frozenset(slots[n_s:])
    organics = frozenset(range(1, n_o + 1))
    sponsoreds = frozenset(range(101, 101 + n_s))
    revenue = {i: rng.uniform(0.1, 10.0) for i in organics | sponsoreds}
    lo_w = 0.0 if allow_zero_weights else 0.05
    weight = {}
    for i in organics:
        for t in organic_pos:
            weight[(i, t)] = rng.uniform(lo_w, 3.0)
    planted = sorted(reserved)
    rng.shuffle(planted)
    valid_positions = {}
    for idx, i in enumerate(sorted(sponsoreds)):
        extras = {t for t in reserved if rng.random() < 0.4}
        valid_positions[i] = frozenset({planted[idx], *extras})
        for t in valid_positions[i]:
            weight[(i, t)] = rng.uniform(lo_w, 3.0)
    return Instance(
        organic=organics,
        sponsored=sponsoreds,
        revenue=revenue,
        weight=weight,
        w0=rng.uniform(0.5, 2.0),
        organic_positions=organic_pos,
        reserved_positions=reserved,
        valid_positions=valid_positions,
        organic_constraint=random_constraint(rng, constraint, sorted(organics)),
    )


def random_constraint(rng, kind, organics):
    if kind == "none" or not organics:
        return UNCONSTRAINED
    if kind == "cardinality":
        return Cardinality(rng.randint(0, len(organics)))
    if kind == "knapsack":
        cost = {i: rng.uniform(1.0, 5.0) for i in organics}
        return Knapsack(cost, rng.uniform(1.0, sum(cost.values())))
    if kind == "partition":
        labels = ["a", "b"]
        groups = {i: labels[rng.randrange(2)] for i in organics}
        return PartitionMatroid(groups, {lab: rng.randint(0, 2) for lab in labels})
    if kind == "explicit":
        sets = {frozenset()}
        for _ in range(rng.randint(1, 3)):
            top = frozenset(rng.sample(organics, rng.randint(1, len(organics))))
            for size in range(len(top) + 1):
                for sub in itertools.combinations(sorted(top), size):
                    sets.add(frozenset(sub))
        return Explicit(frozenset(sets))
    raise ValueError(kind)


@pytest.fixture
def rng():
    return random.Random(20240824)
