"""Exception types shared across the package."""


class InvlossError(Exception):
    """Base class for every error this package raises on purpose."""


class ParameterError(InvlossError, ValueError):
    """A distribution parameter violates its constraint."""


class DomainError(InvlossError, ValueError):
    """An operation argument lies outside the operation's domain."""


class InfeasibleMomentsError(InvlossError, ValueError):
    """The requested family cannot realize the target moments."""


class ConvergenceError(InvlossError, RuntimeError):
    """A numeric procedure failed to reach its tolerance."""
