"""Exception hierarchy shared by all pyradesign modules."""

from __future__ import annotations


class PyradesignError(Exception):
    pass


class DimensionError(PyradesignError, ValueError):
    """Two blocks or permutations live on different point counts."""


class DesignError(PyradesignError, ValueError):
    """A design is malformed or fails a structural precondition."""


class GeometryError(PyradesignError, ValueError):
    pass


class DomainError(PyradesignError, ValueError):
    """An operation was applied outside the family of designs it is defined on."""


class ResourceError(PyradesignError):
    """A search would exceed its configured budget."""


class SearchBudgetExceeded(ResourceError):
    """Raised mid-search; ``partial`` holds whatever was found before the cutoff."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = [] if partial is None else partial


class InvariantViolation(PyradesignError, AssertionError):
    """A property that must hold for every valid input did not.

    These are never caught inside the library: each one is either a bug or a
    counterexample to a structural result the code relies on.
    """
