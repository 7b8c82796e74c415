import itertools
import random

import pytest

from assortplan import (
    BipartiteGraph,
    NoPerfectMatching,
    constrained_perfect_then_partial,
    max_weight_matching,
    min_weight_perfect_matching,
)


def brute_min_perfect(g):
    n = len(g.left)
    best = None
    for perm in itertools.permutations(range(n)):
        total = 0.0
        ok = True
        for i, j in enumerate(perm):
            e = (g.left[i], g.right[j])
            if e not in g.edges:
                ok = False
                break
            total += g.edges[e]
        if ok and (best is None or total < best):
            best = total
    return best


def brute_max_partial(g):
    """Max total over every partial matching, recursing left node by node."""
    left = list(g.left)

    def rec(idx, used):
        if idx == len(left):
            return 0.0
        best = rec(idx + 1, used)
        for b in g.right:
            if b not in used and (left[idx], b) in g.edges:
                used.add(b)
                best = max(best, g.edges[(left[idx], b)] + rec(idx + 1, used))
                used.remove(b)
        return best

    return rec(0, set())


def random_graph(rng, n_left, n_right, density=1.0, weight_span=(-5.0, 5.0)):
    edges = {}
    for a in range(n_left):
        for b in range(10, 10 + n_right):
            if rng.random() < density:
                edges[(a, b)] = rng.uniform(*weight_span)
    return BipartiteGraph.build(range(n_left), range(10, 10 + n_right), edges)


def test_two_by_two_diagonal():
    g = BipartiteGraph.build([0, 1], [2, 3],
                             {(0, 2): 1.0, (0, 3): 10.0, (1, 2): 10.0, (1, 3): 1.0})
    m = min_weight_perfect_matching(g)
    assert m.pairs == ((0, 2), (1, 3))
    assert m.total(g) == 2.0


def test_single_positive_edge():
    g = BipartiteGraph.build([1], [2], {(1, 2): 3.0})
    m = max_weight_matching(g)
    assert m.pairs == ((1, 2),)


def test_all_negative_gives_empty():
    g = BipartiteGraph.build([1, 2], [3, 4],
                             {(1, 3): -1.0, (1, 4): -2.0, (2, 3): -0.5})
    m = max_weight_matching(g)
    assert m.pairs == ()
    assert m.total(g) == 0.0


def test_zero_weight_edges_dropped():
    g = BipartiteGraph.build([1], [2], {(1, 2): 0.0})
    assert max_weight_matching(g).pairs == ()


def test_empty_graph():
    g = BipartiteGraph.build([], [], {})
    assert min_weight_perfect_matching(g).pairs == ()
    assert max_weight_matching(g).pairs == ()


def test_forbidden_edges_respected():
    # only the anti-diagonal is allowed
    g = BipartiteGraph.build([0, 1], [2, 3], {(0, 3): 5.0, (1, 2): 7.0})
    m = min_weight_perfect_matching(g)
    assert m.pairs == ((0, 3), (1, 2))


def test_no_perfect_matching_raises():
    g = BipartiteGraph.build([0, 1], [2, 3], {(0, 2): 1.0, (1, 2): 1.0})
    with pytest.raises(NoPerfectMatching):
        min_weight_perfect_matching(g)
    with pytest.raises(NoPerfectMatching):
        min_weight_perfect_matching(BipartiteGraph.build([0], [2, 3], {(0, 2): 1.0}))


def test_min_perfect_matches_brute_force():
    rng = random.Random(41)
    for trial in range(150):
        n = rng.randint(1, 5)
        g = random_graph(rng, n, n, density=0.9)
        expected = brute_min_perfect(g)
        if expected is None:
            with pytest.raises(NoPerfectMatching):
                min_weight_perfect_matching(g)
            continue
        m = min_weight_perfect_matching(g)
        assert abs(m.total(g) - expected) < 1e-12, trial


def test_max_partial_matches_brute_force():
    rng = random.Random(42)
    for trial in range(150):
        g = random_graph(rng, rng.randint(0, 4), rng.randint(0, 4), density=0.8)
        m = max_weight_matching(g)
        assert abs(m.total(g) - brute_max_partial(g)) < 1e-12, trial
        assert all(g.edges[p] > 0 for p in m.pairs)


def test_negation_swaps_min_and_max():
    rng = random.Random(43)
    empty = BipartiteGraph.build([], [], {})
    for _ in range(60):
        n = rng.randint(1, 4)
        g = random_graph(rng, n, n, density=1.0)
        m_min = min_weight_perfect_matching(g)
        m_max, _ = constrained_perfect_then_partial(g, empty, "maximize")
        neg = g.negate()
        max_on_neg, _ = constrained_perfect_then_partial(neg, empty, "maximize")
        assert abs(m_min.total(g) + max_on_neg.total(neg)) < 1e-12
        assert abs(m_max.total(g) + min_weight_perfect_matching(neg).total(neg)) < 1e-12


def test_deterministic_lexicographic_ties():
    # every perfect matching weighs 2, so the identity must win
    g = BipartiteGraph.build([0, 1], [2, 3],
                             {(0, 2): 1.0, (0, 3): 1.0, (1, 2): 1.0, (1, 3): 1.0})
    for _ in range(5):
        assert min_weight_perfect_matching(g).pairs == ((0, 2), (1, 3))
    # ties against staying unmatched resolve to the smaller pair list
    g2 = BipartiteGraph.build([0, 1], [2], {(0, 2): 4.0, (1, 2): 4.0})
    assert max_weight_matching(g2).pairs == ((0, 2),)


def test_identical_inputs_identical_outputs():
    rng = random.Random(44)
    for _ in range(30):
        n = rng.randint(1, 5)
        g = random_graph(rng, n, n, density=1.0, weight_span=(0.0, 1.0))
        first = min_weight_perfect_matching(g)
        for _ in range(3):
            assert min_weight_perfect_matching(g).pairs == first.pairs


def test_constrained_pair_modes():
    g_perfect = BipartiteGraph.build([0], [5], {(0, 5): 2.0})
    g_partial = BipartiteGraph.build([1, 2], [6, 7],
                                     {(1, 6): -1.0, (1, 7): 3.0, (2, 6): 2.0})
    first, second = constrained_perfect_then_partial(g_perfect, g_partial, "maximize")
    assert first.pairs == ((0, 5),)
    assert second.pairs == ((1, 7), (2, 6))
    first, second = constrained_perfect_then_partial(g_perfect, g_partial, "minimize")
    assert first.pairs == ((0, 5),)
    # minimizing the partial block keeps only beneficial negative edges
    assert second.pairs == ((1, 6),)
