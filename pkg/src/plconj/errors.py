"""Exception types shared across the package."""


class PLConjError(Exception):
    """Base class for all library errors."""


class DomainError(PLConjError):
    """Input outside the documented domain (values off [0,1], bad breakpoints, ...)."""


class BudgetExceededError(PLConjError):
    """A composed map would exceed the piece budget.

    Iterating a k-piece map n times can produce k**n pieces, so running out of
    budget is an expected outcome, not a crash.
    """

    def __init__(self, pieces, budget):
        super().__init__(f"piece count {pieces} exceeds budget {budget}")
        self.pieces = pieces
        self.budget = budget


class ShapeError(PLConjError):
    """Map does not have the shape an operation requires (e.g. not unimodal)."""


class PreconditionError(PLConjError):
    """Operation invoked outside its stated precondition."""


class WitnessDepthExceededError(PLConjError):
    """Witness construction exhausted its depth budget above the tolerance."""

    def __init__(self, achieved, tolerance, depth):
        super().__init__(
            "witness defect %s still above tolerance %s at depth %d"
            % (achieved, tolerance, depth)
        )
        self.achieved = achieved
        self.tolerance = tolerance
        self.depth = depth


class InternalInvariantError(PLConjError):
    """A structural guarantee failed; indicates a bug in an upstream stage."""


class MapSpecError(PLConjError):
    """Parse or validation failure in the map DSL, with source position."""

    def __init__(self, message, line, column, expected=None):
        text = f"line {line}, column {column}: {message}"
        if expected:
            text += " (expected " + " | ".join(expected) + ")"
        super().__init__(text)
        self.line = line
        self.column = column
        self.expected = tuple(expected) if expected else ()
