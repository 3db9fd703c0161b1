"""Exception types shared across the package."""


class EnriquesError(Exception):
    """Base class for errors raised by this package."""


class InvalidDiagramError(EnriquesError, ValueError):
    """A diagram violates an axiom or is structurally broken."""

    def __init__(self, problems):
        if isinstance(problems, str):
            self.problems = []
            super().__init__(problems)
        else:
            self.problems = list(problems)
            super().__init__("; ".join(str(p) for p in self.problems))


class InadmissibleOrderingError(EnriquesError, ValueError):
    """A vertex order does not refine the tree order."""


class PreconditionError(EnriquesError, ValueError):
    """An operation was called on an input outside its domain."""


class ResourceLimitError(EnriquesError):
    """A configured cap (vertices, degree, steps) was exceeded."""


class SearchBudgetExceeded(ResourceLimitError):
    """A search ran out of nodes before reaching an answer.

    This means *unknown*, never *false*.
    """
