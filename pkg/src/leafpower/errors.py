from __future__ import annotations


class ResourceError(RuntimeError):
    """The instance exceeds a configured size or degree limit."""


class PreconditionError(ValueError):
    """An operation was called on inputs that break its contract."""
