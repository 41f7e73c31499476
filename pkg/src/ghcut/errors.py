"""Exception types shared across the package."""


class GHCutError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(GHCutError):
    """Raised when a caller passes arguments that violate a documented precondition."""


class ParseError(GHCutError):
    """Raised when a text-format graph or tree fails to parse."""


class InternalError(GHCutError):
    """Raised when an internal invariant is violated.

    Seeing this exception means a bug in the package, not in caller input.
    """
