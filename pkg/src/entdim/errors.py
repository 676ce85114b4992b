"""Exception types shared across the library."""


class EntdimError(Exception):
    """Base class for all library errors."""


class SpaceMismatchError(EntdimError, ValueError):
    """A set or measure was used with a ground space it does not belong to."""


class PreconditionError(EntdimError, ValueError):
    """An operation's stated precondition was violated."""


class BudgetError(EntdimError, RuntimeError):
    """An exact solver would exceed its enumeration budget."""


class ResolutionError(EntdimError, ValueError):
    """A grid is too coarse to resolve the requested cell length."""
