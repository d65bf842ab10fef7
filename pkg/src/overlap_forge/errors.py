"""Exception types shared across the package."""


class OverlapForgeError(Exception):
    """Base class for all package errors."""


class InfeasibleError(OverlapForgeError):
    """Requested mapping admits no physical (unitary) realization."""


class DegenerateInputError(OverlapForgeError):
    """Inputs collapse a construction that needs independent directions.

    Raised when moduli vanish or phases collide where the solver needs them
    apart, or when state vectors handed to the synthesis stage are parallel.
    """


class DomainError(OverlapForgeError):
    """Parameter outside the mathematical domain of a closed-form expression."""


class InconsistentSolutionError(OverlapForgeError):
    """A solution handed to a downstream stage fails its ground-truth check.

    Signals an upstream solver bug, not bad user input.
    """
