"""Assortment planning with sponsored slots under position-dependent MNL."""

from .constrained import (
    CandidateReport,
    CombinedReport,
    candidate_one,
    candidate_two,
    min_weight_sponsored,
    solve_constrained,
)
from .errors import (
    AssortPlanError,
    BudgetExceeded,
    ConfigError,
    ConvergenceFailure,
    GroundSetTooLarge,
    InfeasibleSponsoredAssignment,
    InvalidPlacement,
    NoPerfectMatching,
    ParseError,
    ProductNotInSet,
    ProductNotPlaced,
    ValidationError,
)
from .exact import (
    DinkelbachTrace,
    inner_parametric_step,
    solve_exact,
    solve_sponsored_only,
)
from .generate import GeneratorConfig, generate, load_config
from .matching import (
    BipartiteGraph,
    Matching,
    constrained_perfect_then_partial,
    max_weight_matching,
    min_weight_perfect_matching,
)
from .model import (
    Cardinality,
    ConstraintFamily,
    Explicit,
    FeasibilityVerdict,
    Instance,
    Knapsack,
    PartitionMatroid,
    Placement,
    Unconstrained,
    UNCONSTRAINED,
    check_feasible,
    choice_probability,
    expected_revenue,
)
from .oracle import (
    OracleBudget,
    enumeration_counts,
    exhaustive_h,
    oracle_p0,
    oracle_p2,
    oracle_p5,
    oracle_p6,
)
from .serialize import (
    instance_from_dict,
    instance_to_dict,
    parse_instance,
    parse_placement,
    placement_to_dict,
)
from .submodular import (
    FeasibilitySystem,
    MaximizerResult,
    brute_force_maximize,
    maximize,
)
from .surrogate import (
    Element,
    ElementSet,
    SurrogateObjective,
    best_subset,
    effective_weight,
    set_utility,
    surrogate_value,
)

__version__ = "0.1.0"
