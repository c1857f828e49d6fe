"""Exception taxonomy shared by the library and the command-line front end."""


class ConfigError(ValueError):
    """A parameter, config file entry, or object field fails validation."""


class FramingError(ValueError):
    """An input array does not match the expected frame or bit layout."""


class EqualizationError(ArithmeticError):
    """Zero-forcing equalization hit an exactly-zero response on a data bin."""
