import random

import pytest

from assortplan import (
    ConvergenceFailure,
    InfeasibleSponsoredAssignment,
    Instance,
    Placement,
    expected_revenue,
    inner_parametric_step,
    oracle_p0,
    solve_exact,
    solve_sponsored_only,
)
from conftest import random_instance


def forced_sponsored_instance():
    return Instance(
        organic=frozenset(), sponsored=frozenset({1}),
        revenue={1: 6.0}, weight={(1, 1): 2.0}, w0=1.0,
        organic_positions=frozenset(), reserved_positions=frozenset({1}),
        valid_positions={1: frozenset({1})})


def test_single_sponsored_forced_slot():
    pl, rev, trace = solve_exact(forced_sponsored_instance())
    assert pl.pairs == ((1, 1),)
    assert rev == pytest.approx(4.0, abs=1e-12)
    assert trace.converged


def test_single_organic():
    inst = Instance(
        organic=frozenset({7}), sponsored=frozenset(),
        revenue={7: 10.0}, weight={(7, 1): 1.0}, w0=1.0,
        organic_positions=frozenset({1}), reserved_positions=frozenset(),
        valid_positions={})
    pl, rev, _ = solve_exact(inst)
    assert pl.pairs == ((1, 7),)
    assert rev == pytest.approx(5.0, abs=1e-12)


def test_empty_instance():
    inst = Instance(
        organic=frozenset(), sponsored=frozenset(),
        revenue={}, weight={}, w0=1.0,
        organic_positions=frozenset({1}), reserved_positions=frozenset(),
        valid_positions={})
    pl, rev, trace = solve_exact(inst)
    assert pl.pairs == ()
    assert rev == 0.0
    assert trace.converged


def test_first_inner_step_picks_positive_revenue_organics():
    inst = Instance(
        organic=frozenset({1, 2}), sponsored=frozenset(),
        revenue={1: 5.0, 2: 0.0},
        weight={(1, 1): 1.0, (1, 2): 0.5, (2, 1): 1.0, (2, 2): 1.0},
        w0=1.0,
        organic_positions=frozenset({1, 2}), reserved_positions=frozenset(),
        valid_positions={})
    pl, value = inner_parametric_step(inst, 0.0)
    # at lambda 0 only positive-revenue products carry positive value
    assert pl.products() == frozenset({1})
    assert pl.position_of(1) == 1
    assert value == pytest.approx(5.0)


def test_matches_oracle_on_random_instances():
    rng = random.Random(71)
    for trial in range(150):
        inst = random_instance(rng)
        pl, rev, trace = solve_exact(inst)
        _, opt = oracle_p0(inst)
        assert abs(rev - opt) < 1e-9, (trial, rev, opt)
        assert trace.converged


def test_trace_lambda_strictly_increases():
    rng = random.Random(72)
    for _ in range(60):
        inst = random_instance(rng, min_organic=1)
        _, _, trace = solve_exact(inst)
        lams = [lam for lam, _, _ in trace.iterations]
        assert all(b > a for a, b in zip(lams, lams[1:]))
        assert trace.iterations[-1][1] <= 1e-9
        # every iterate is itself a feasible, scoreable placement
        for _, _, pl in trace.iterations:
            expected_revenue(inst, pl)


def test_scale_invariance():
    rng = random.Random(73)
    for _ in range(40):
        inst = random_instance(rng, min_organic=1)
        pl, rev, _ = solve_exact(inst)
        scaled = Instance(
            inst.organic, inst.sponsored,
            {i: 3.0 * r for i, r in inst.revenue.items()},
            inst.weight, inst.w0, inst.organic_positions,
            inst.reserved_positions, inst.valid_positions,
            inst.organic_constraint)
        pl_s, rev_s, _ = solve_exact(scaled)
        assert pl_s.pairs == pl.pairs
        assert rev_s == pytest.approx(3.0 * rev, rel=1e-12)


def test_infeasible_sponsored_raises():
    inst = Instance(
        organic=frozenset(), sponsored=frozenset({1, 2}),
        revenue={1: 1.0, 2: 1.0},
        weight={(1, 1): 1.0, (2, 1): 1.0},
        w0=1.0,
        organic_positions=frozenset(), reserved_positions=frozenset({1, 2}),
        valid_positions={1: frozenset({1}), 2: frozenset({1})})
    with pytest.raises(InfeasibleSponsoredAssignment):
        solve_exact(inst)


def test_sponsored_only_ignores_organics():
    rng = random.Random(74)
    for _ in range(40):
        inst = random_instance(rng, min_organic=1, max_sponsored=2)
        pl, rev = solve_sponsored_only(inst)
        assert pl.products() <= inst.sponsored
        if inst.sponsored:
            assert pl.products() == inst.sponsored
        # scoring against the full instance gives the same revenue
        assert expected_revenue(inst, pl) == pytest.approx(rev, abs=1e-12)


def test_determinism():
    rng = random.Random(75)
    for _ in range(20):
        inst = random_instance(rng, min_organic=1)
        first = solve_exact(inst)
        for _ in range(3):
            again = solve_exact(inst)
            assert again[0].pairs == first[0].pairs
            assert again[1] == first[1]
