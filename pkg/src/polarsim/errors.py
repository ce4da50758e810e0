"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when a matrix or vector argument violates an operation's contract."""


class InvalidParameterError(ValueError):
    """Raised when a scalar parameter is outside its allowed range."""


class UnsupportedConfigurationError(ValueError):
    """Raised when an optimizer is called on a system shape it does not handle."""


class OutOfRangeError(ValueError):
    """Raised when an interpolation target is not bracketed by the data."""


class ConfigError(ValueError):
    """Raised for malformed experiment configurations; names the offending field."""
