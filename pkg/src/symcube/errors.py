"""Exception types shared across the package."""


class SymcubeError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(SymcubeError, ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(SymcubeError):
    """A combinatorial budget (size, node count, wall clock) was exceeded."""


class ConstructionBugError(SymcubeError):
    """An internal construction produced an object failing its own check.

    Raised by constructions that are proven correct; firing indicates a bug.
    """


class NotACubeError(SymcubeError):
    """A candidate structure violates one of the cube axioms."""

    def __init__(self, message: str, constraint: str | None = None):
        super().__init__(message)
        self.constraint = constraint
