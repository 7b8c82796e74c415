"""Exact solver for the unconstrained placement problem.

Maximizing f(pl) = N(pl) / D(pl) over feasible placements is a
linear-fractional program; Dinkelbach's parametric method reduces it to
a short sequence of linear subproblems.  At parameter lam the inner
problem maximizes

    sum (r_i - lam) * w(i, t) * x_it  -  lam * w0

over the assignment polytope, which decomposes into two independent
matchings: a mandatory perfect matching of sponsored products into
reserved slots (negative values allowed) and a free partial matching of
organics into organic slots (only positive values help).  Integrality
of the polytope makes the matching optimum the true inner optimum, so
each iterate is a feasible placement and lam climbs strictly until the
inner value vanishes, after finitely many steps.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConvergenceFailure, InfeasibleSponsoredAssignment, NoPerfectMatching
from .matching import BipartiteGraph, constrained_perfect_then_partial
from .model import Instance, Placement, expected_revenue

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DinkelbachTrace:
    """Per-iteration (lambda, inner_value, placement) triples."""

    iterations: tuple[tuple[float, float, Placement], ...]
    converged: bool


def _blocks(inst: Instance, lam: float) -> tuple[BipartiteGraph, BipartiteGraph]:
    sponsored_edges = {
        (i, t): (inst.revenue[i] - lam) * inst.w(i, t)
        for i in inst.sponsored for t in inst.valid_positions[i]}
    organic_edges = {
        (i, t): (inst.revenue[i] - lam) * inst.w(i, t)
        for i in inst.organic for t in inst.organic_positions
        if inst.w(i, t) > 0.0}
    g_s = BipartiteGraph.build(inst.sponsored, inst.reserved_positions, sponsored_edges)
    g_o = BipartiteGraph.build(inst.organic, inst.organic_positions, organic_edges)
    return g_s, g_o


def inner_parametric_step(inst: Instance, lam: float) -> tuple[Placement, float]:
    """Maximize the lam-parameterized linear surrogate; return its argmax
    placement and the surrogate value."""
    g_s, g_o = _blocks(inst, lam)
    try:
        m_s, m_o = constrained_perfect_then_partial(g_s, g_o, "maximize")
    except NoPerfectMatching as exc:
        raise InfeasibleSponsoredAssignment(
            f"sponsored products cannot fill the reserved slots: {exc}") from exc
    pairs = [(t, i) for i, t in m_s.pairs] + [(t, i) for i, t in m_o.pairs]
    value = m_s.total(g_s) + m_o.total(g_o) - lam * inst.w0
    return Placement.from_pairs(pairs), value


def solve_exact(inst: Instance, tolerance: float = DEFAULT_TOLERANCE,
                ) -> tuple[Placement, float, DinkelbachTrace]:
    """Optimal placement for the unconstrained problem.

    Returns (placement, revenue, trace).  Raises
    InfeasibleSponsoredAssignment when the sponsored products cannot
    fill the reserved slots, and ConvergenceFailure if the iteration cap
    of 10 * (|O| + |S|) * k is ever hit (a safety net; finite
    convergence is guaranteed).
    """
    cap = max(1, 10 * (len(inst.organic) + len(inst.sponsored)) * inst.n_positions)
    lam = 0.0
    trace: list[tuple[float, float, Placement]] = []
    for _ in range(cap):
        pl, value = inner_parametric_step(inst, lam)
        trace.append((lam, value, pl))
        if value <= tolerance:
            return pl, expected_revenue(inst, pl), DinkelbachTrace(tuple(trace), True)
        lam = expected_revenue(inst, pl)
    raise ConvergenceFailure(
        f"parametric iteration did not reach tolerance {tolerance} in {cap} steps")


def solve_sponsored_only(inst: Instance, tolerance: float = DEFAULT_TOLERANCE,
                         ) -> tuple[Placement, float]:
    """Optimal placement when only the sponsored products are shown."""
    stripped = Instance(
        organic=frozenset(),
        sponsored=inst.sponsored,
        revenue={i: inst.revenue[i] for i in inst.sponsored},
        weight={(i, t): w for (i, t), w in inst.weight.items() if i in inst.sponsored},
        w0=inst.w0,
        organic_positions=inst.organic_positions,
        reserved_positions=inst.reserved_positions,
        valid_positions=inst.valid_positions,
    )
    pl, revenue, _ = solve_exact(stripped, tolerance)
    return pl, revenue
