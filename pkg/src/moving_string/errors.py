"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A configuration value violates a documented precondition."""


class NumericError(RuntimeError):
    """A numeric stage produced or encountered a non-finite value."""
