"""Bipartite matching with deterministic tie-breaking.

Min-weight perfect matching is solved by the augmenting-path Hungarian
method with potentials, O(n^3).  Forbidden pairs are simply absent from
the edge map; internally they behave as +inf reduced costs, never as
finite sentinels.  Max-weight (partial) matching reduces to the perfect
case on a padded square graph whose dummy cells carry weight 0, so an
unmatched node is just a node matched to its own dummy.

Among equal-weight optima the returned matching is the one whose sorted
pair list is lexicographically smallest.  This is enforced exactly: the
optimal duals define the tight-edge subgraph containing every optimal
matching (complementary slackness), and a greedy pass fixes, left node
by left node, the smallest partner that still leaves the subgraph
perfectly matchable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import NoPerfectMatching, ValidationError

# reduced-cost zero test; scaled by the largest absolute edge weight
EPS_TIGHT = 1e-12


@dataclass(frozen=True)
class BipartiteGraph:
    """Weighted bipartite graph; absent pairs are forbidden, not zero."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: Mapping[tuple[int, int], float]

    @classmethod
    def build(cls, left: Iterable[int], right: Iterable[int],
              edges: Mapping[tuple[int, int], float]) -> "BipartiteGraph":
        left_t = tuple(sorted(set(left)))
        right_t = tuple(sorted(set(right)))
        ls, rs = set(left_t), set(right_t)
        for (a, b), w in edges.items():
            if a not in ls or b not in rs:
                raise ValidationError(f"edge ({a}, {b}) has an endpoint outside the node sets")
            if not math.isfinite(w):
                raise ValidationError(f"edge ({a}, {b}) has non-finite weight {w}")
        return cls(left_t, right_t, dict(edges))

    def negate(self) -> "BipartiteGraph":
        return BipartiteGraph(self.left, self.right,
                              {e: -w for e, w in self.edges.items()})


@dataclass(frozen=True)
class Matching:
    """Set of matched (left, right) pairs, sorted by left node."""

    pairs: tuple[tuple[int, int], ...]

    def total(self, g: BipartiteGraph) -> float:
        return sum(g.edges[p] for p in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _hungarian(cost: list[list[float]]) -> tuple[list[int], list[float], list[float]]:
    """Min-cost assignment on a square matrix, inf marking forbidden cells.

    Returns (row_for_col, u, v): row_for_col[j] is the row matched to
    column j, u/v the optimal potentials (0-based).  Raises
    NoPerfectMatching when some cut cannot be crossed.
    """
    n = len(cost)
    INF = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)        # p[j]: row (1-based) matched to column j; p[0] is the row being placed
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = -1
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            if delta == INF:
                raise NoPerfectMatching("no perfect matching covers all nodes")
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_for_col = [p[j] - 1 for j in range(1, n + 1)]
    return row_for_col, u[1:], v[1:]


def _perfectly_matchable(adj: list[list[int]], n_right: int,
                         forced: dict[int, int]) -> bool:
    """Kuhn's algorithm: can every left node be matched, honoring forced pairs?"""
    match_r = [-1] * n_right
    for l, r in forced.items():
        match_r[r] = l
    order = [l for l in range(len(adj)) if l not in forced]

    def try_augment(l: int, seen: list[bool]) -> bool:
        for r in adj[l]:
            if not seen[r]:
                seen[r] = True
                holder = match_r[r]
                if holder in forced:
                    continue
                if holder == -1 or try_augment(holder, seen):
                    match_r[r] = l
                    return True
        return False

    for l in order:
        if not try_augment(l, [False] * n_right):
            return False
    return True


def _lex_smallest_perfect(tight: list[list[int]]) -> list[int]:
    """Lexicographically smallest perfect matching of the tight subgraph.

    tight[l] lists candidate right indices in ascending order; a perfect
    matching is known to exist.
    """
    n = len(tight)
    forced: dict[int, int] = {}
    taken: set[int] = set()
    for l in range(n):
        for r in tight[l]:
            if r in taken:
                continue
            forced[l] = r
            if _perfectly_matchable(tight, n, forced):
                taken.add(r)
                break
            del forced[l]
        else:
            raise AssertionError("tight subgraph lost its perfect matching")
    return [forced[l] for l in range(n)]


def min_weight_perfect_matching(g: BipartiteGraph) -> Matching:
    """Minimum-total-weight perfect matching of g.

    Requires |left| == |right|; raises NoPerfectMatching when the sides
    differ or the allowed edges cannot cover every node.  Ties resolve
    to the lexicographically smallest pair list.
    """
    n = len(g.left)
    if n != len(g.right):
        raise NoPerfectMatching(
            f"sides have different sizes: {n} vs {len(g.right)}")
    if n == 0:
        return Matching(())
    lidx = {a: i for i, a in enumerate(g.left)}
    ridx = {b: j for j, b in enumerate(g.right)}
    cost = [[math.inf] * n for _ in range(n)]
    scale = 1.0
    for (a, b), w in g.edges.items():
        cost[lidx[a]][ridx[b]] = w
        scale = max(scale, abs(w))
    row_for_col, u, v = _hungarian(cost)
    tol = EPS_TIGHT * scale
    tight: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if cost[i][j] - u[i] - v[j] <= tol:
                tight[i].append(j)
    # the matching just found must survive float noise in the duals
    for j, i in enumerate(row_for_col):
        if j not in tight[i]:
            tight[i].append(j)
            tight[i].sort()
    col_for_row = _lex_smallest_perfect(tight)
    return Matching(tuple((g.left[i], g.right[col_for_row[i]]) for i in range(n)))


def max_weight_matching(g: BipartiteGraph) -> Matching:
    """Maximum-total-weight matching of g, possibly partial.

    Only strictly positive edges can appear in the result; a graph with
    no positive edge yields the empty matching.  Ties (including ties
    against leaving nodes unmatched) resolve to the lexicographically
    smallest pair list, so zero-gain edges are dropped.
    """
    nl, nr = len(g.left), len(g.right)
    pos = {(a, b): w for (a, b), w in g.edges.items() if w > 0.0}
    if not pos:
        return Matching(())
    lidx = {a: i for i, a in enumerate(g.left)}
    ridx = {b: j for j, b in enumerate(g.right)}
    n = nl + nr
    cost = [[math.inf] * n for _ in range(n)]
    scale = 1.0
    for (a, b), w in pos.items():
        cost[lidx[a]][ridx[b]] = -w
        scale = max(scale, w)
    for i in range(nl):
        cost[i][nr + i] = 0.0            # left i unmatched
    for j in range(nr):
        cost[nl + j][j] = 0.0            # right j unmatched
        for i in range(nl):
            cost[nl + j][nr + i] = 0.0   # dummy-dummy filler
    row_for_col, u, v = _hungarian(cost)
    tol = EPS_TIGHT * scale
    tight: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if cost[i][j] < math.inf and cost[i][j] - u[i] - v[j] <= tol:
                tight[i].append(j)
    for j, i in enumerate(row_for_col):
        if j not in tight[i]:
            tight[i].append(j)
            tight[i].sort()
    # fix real left rows greedily: smallest real partner first, then the
    # node's own dummy (= unmatched); dummy rows are completed freely
    forced: dict[int, int] = {}
    taken: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for i in range(nl):
        candidates = [j for j in tight[i] if j < nr and j not in taken]
        candidates.append(nr + i)
        for j in candidates:
            if j >= nr and j not in tight[i]:
                continue
            forced[i] = j
            if _perfectly_matchable(tight, n, forced):
                taken.add(j)
                if j < nr:
                    pairs.append((g.left[i], g.right[j]))
                break
            del forced[i]
        else:
            raise AssertionError("padded tight subgraph lost its perfect matching")
    return Matching(tuple(pairs))


def constrained_perfect_then_partial(
        g_perfect: BipartiteGraph, g_partial: BipartiteGraph,
        mode: str) -> tuple[Matching, Matching]:
    """Solve the two independent blocks of the placement relaxation.

    The first graph must be perfectly matched (min or max total per
    `mode`); the second gets an optimal partial matching in the same
    direction.  mode is "minimize" or "maximize".
    """
    if mode == "minimize":
        first = min_weight_perfect_matching(g_perfect)
        second = max_weight_matching(g_partial.negate())
    elif mode == "maximize":
        first_neg = min_weight_perfect_matching(g_perfect.negate())
        first = Matching(first_neg.pairs)
        second = max_weight_matching(g_partial)
    else:
        raise ValidationError(f"mode must be 'minimize' or 'maximize', got {mode!r}")
    return first, second
