"""Exceptions shared across modules."""


class ResourceLimitExceeded(RuntimeError):
    """A computation would exceed a configured size cap."""
