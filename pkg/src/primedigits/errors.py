"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""
