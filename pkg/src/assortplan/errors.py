"""Exception types shared across the package.

Every documented failure mode raises one of these instead of a bare
ValueError, so callers (and the CLI) can map errors to exit codes.
"""


class AssortPlanError(Exception):
    """Base class for all package errors."""


class ValidationError(AssortPlanError):
    """Instance or constraint data violates a structural invariant."""


class InvalidPlacement(AssortPlanError):
    """Placement breaks a hard structural rule (duplicate product,
    unknown id, sponsored product outside its valid slots)."""


class ProductNotPlaced(AssortPlanError):
    """Choice probability queried for a product absent from the placement."""


class ProductNotInSet(AssortPlanError):
    """Effective weight queried for a product with no element in the set."""


class NoPerfectMatching(AssortPlanError):
    """Bipartite graph admits no perfect matching."""


class InfeasibleSponsoredAssignment(AssortPlanError):
    """Sponsored products cannot be placed into the reserved slots."""


class ConvergenceFailure(AssortPlanError):
    """Parametric iteration hit its cap without reaching the tolerance."""


class GroundSetTooLarge(AssortPlanError):
    """Brute-force subset maximization refused: ground set over the cap."""


class BudgetExceeded(AssortPlanError):
    """Oracle refused to enumerate an instance over its size budget."""


class ParseError(AssortPlanError):
    """Input file is not syntactically valid for the documented schema."""


class ConfigError(AssortPlanError):
    """Generator configuration is malformed or inconsistent."""
