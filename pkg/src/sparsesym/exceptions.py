"""Exception types raised across the package."""


class DomainError(ValueError):
    """A point or argument lies outside the admissible domain."""


class ResourceCapError(RuntimeError):
    """An enumeration or combinatorial loop would exceed the configured cap."""


class NumericalError(RuntimeError):
    """A numerical routine failed (rank deficiency, bracketing, eigensolver)."""
