"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's documented domain."""


class ResourceError(RuntimeError):
    """A request would exceed a configured memory or size budget."""
