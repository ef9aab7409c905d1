"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside a model's or operation's validity domain."""


class DataError(ValueError):
    """Measured/serialized data is malformed, inconsistent or insufficient."""
