"""Exception types shared across the package."""


class BlaschkeError(Exception):
    """Base class for all library errors."""


class DomainError(BlaschkeError):
    """Input outside the mathematical domain (point off the closed disc, pole hit)."""


class UsageError(BlaschkeError):
    """Operation precondition violated (e.g. product does not fix the origin)."""


class CapacityError(BlaschkeError):
    """Materialized degree would exceed the configured cap; use nested evaluation."""


class RootFindingError(BlaschkeError):
    """Root polishing failed to converge; carries the worst residual seen."""

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class ConsistencyError(BlaschkeError):
    """Numerical result violates a mathematically guaranteed property."""


class SingularAngleError(BlaschkeError):
    """Boundary angle coincides with a zero argument; carries step/node indices."""

    def __init__(self, message, step=None, node=None):
        super().__init__(message)
        self.step = step
        self.node = node


class DivergentProductError(BlaschkeError):
    """Supplied zero sequence fails the Blaschke condition check."""


class DegreeCollapseError(BlaschkeError):
    """Frostman term requested for a generator with vanishing origin derivative."""
