"""Exception hierarchy shared by every module."""


class RDLError(Exception):
    pass


class ParameterError(RDLError, ValueError):
    """Invalid parameters for a generator, density call or search."""


class ContractError(RDLError):
    """A precondition of an operation does not hold for the given input."""


class BudgetError(RDLError):
    """Exact search requested beyond its configured size budget."""


class SearchFailure(RDLError):
    """A heuristic could not produce a valid object; never returned silently."""


class InternalError(RDLError):
    """A result contradicts the theorem it is supposed to realize."""
