"""Exception hierarchy shared across the package.

Domain errors map to CLI exit code 2, resource errors to exit code 3.
"""


class PrimewalkError(Exception):
    pass


class DomainError(PrimewalkError, ValueError):
    pass


class ResourceError(PrimewalkError):
    pass


class InsufficientSieveError(ResourceError):
    """Raised when a request needs more primes than a store holds."""

    def __init__(self, message, required_limit=None):
        super().__init__(message)
        self.required_limit = required_limit


class InsufficientEnsembleError(ResourceError):
    pass


class PoleError(DomainError):
    def __init__(self, message, residue=None):
        super().__init__(message)
        self.residue = residue


class SingularFactorError(DomainError):
    pass


class DegenerateError(DomainError):
    """Zero variance, constant input or an otherwise undefined fit."""
