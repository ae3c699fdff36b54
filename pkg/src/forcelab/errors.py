"""Shared exception types."""


class PreconditionError(ValueError):
    """An operation was invoked outside its stated contract."""


class PropertyFault(RuntimeError):
    """An internal invariant that the constructions guarantee was observed to fail."""
